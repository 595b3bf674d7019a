import type { Feature, FeatureCollection, RouteDoc, RouteKind } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
export const VIEW_WIDTH = 800;
export const VIEW_HEIGHT = 560;
const PADDING = 30;

type Project = (lon: number, lat: number) => [number, number];

function collectCoordinates(features: Feature[]): [number, number][] {
  const out: [number, number][] = [];
  for (const feature of features) {
    const g = feature.geometry;
    if (g.type === "Point") {
      out.push(g.coordinates as [number, number]);
    } else if (g.type === "LineString") {
      out.push(...(g.coordinates as [number, number][]));
    } else {
      out.push(...(g.coordinates as [number, number][][])[0]);
    }
  }
  return out;
}

/** Fit all plan coordinates into the view box, preserving aspect ratio. */
export function makeProjection(plan: FeatureCollection): Project {
  const coords = collectCoordinates(plan.features);
  if (coords.length === 0) {
    return () => [VIEW_WIDTH / 2, VIEW_HEIGHT / 2];
  }
  const lons = coords.map((c) => c[0]);
  const lats = coords.map((c) => c[1]);
  const minLon = Math.min(...lons);
  const maxLon = Math.max(...lons);
  const minLat = Math.min(...lats);
  const maxLat = Math.max(...lats);
  // crude local meters so x and y scale alike at building size
  const midLat = (minLat + maxLat) / 2;
  const lonScale = Math.cos((midLat * Math.PI) / 180);
  const widthM = Math.max((maxLon - minLon) * lonScale, 1e-9);
  const heightM = Math.max(maxLat - minLat, 1e-9);
  const scale = Math.min(
    (VIEW_WIDTH - 2 * PADDING) / widthM,
    (VIEW_HEIGHT - 2 * PADDING) / heightM,
  );
  return (lon, lat) => [
    PADDING + (lon - minLon) * lonScale * scale,
    VIEW_HEIGHT - PADDING - (lat - minLat) * scale,
  ];
}

function el<K extends keyof SVGElementTagNameMap>(
  name: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, name);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

const MARKER_GLYPHS: Record<string, string> = {
  elevator_node: "E",
  stairs_node: "S",
  entrance: "⌂",
  door: "·",
};

/** Draw one floor: room polygons with names, corridor lines, marker points. */
export function renderPlan(svg: SVGSVGElement, plan: FeatureCollection): Project {
  svg.setAttribute("viewBox", `0 0 ${VIEW_WIDTH} ${VIEW_HEIGHT}`);
  svg.replaceChildren();
  const project = makeProjection(plan);

  const layers = {
    rooms: el("g", { class: "layer-rooms" }),
    corridors: el("g", { class: "layer-corridors" }),
    markers: el("g", { class: "layer-markers" }),
    routes: el("g", { class: "layer-routes" }),
    labels: el("g", { class: "layer-labels" }),
  };

  for (const feature of plan.features) {
    const props = feature.properties;
    if (props.feature === "room" && feature.geometry.type === "Polygon") {
      const ring = (feature.geometry.coordinates as [number, number][][])[0];
      const points = ring.map(([lon, lat]) => project(lon, lat).join(",")).join(" ");
      layers.rooms.append(el("polygon", { points, class: "room" }));
      const xs = ring.map(([lon, lat]) => project(lon, lat));
      const cx = xs.reduce((sum, p) => sum + p[0], 0) / xs.length;
      const cy = xs.reduce((sum, p) => sum + p[1], 0) / xs.length;
      const label = el("text", { x: cx, y: cy, class: "room-label" });
      label.textContent = String(props.name ?? props.place_id ?? "");
      layers.labels.append(label);
    } else if (props.feature === "corridor" && feature.geometry.type === "LineString") {
      const points = (feature.geometry.coordinates as [number, number][])
        .map(([lon, lat]) => project(lon, lat).join(","))
        .join(" ");
      layers.corridors.append(
        el("polyline", { points, class: `corridor corridor-${String(props.kind ?? "corridor")}` }),
      );
    } else if (props.feature === "place" && feature.geometry.type === "Point") {
      const [lon, lat] = feature.geometry.coordinates as [number, number];
      const [x, y] = project(lon, lat);
      const kind = String(props.kind ?? "");
      const glyph = MARKER_GLYPHS[kind];
      if (!glyph) continue;
      const group = el("g", { class: `marker marker-${kind}`, "data-place": String(props.place_id ?? "") });
      group.append(el("circle", { cx: x, cy: y, r: kind === "door" ? 3 : 8 }));
      if (kind !== "door") {
        const text = el("text", { x, y: y + 3.5, class: "marker-glyph" });
        text.textContent = glyph;
        group.append(text);
      }
      layers.markers.append(group);
    }
  }

  svg.append(layers.rooms, layers.corridors, layers.routes, layers.markers, layers.labels);
  return project;
}

/** Overlay the legs of a route that belong to the visible level.
 *
 * Legs continuing on another level are announced with a small badge at the
 * boundary, so the user knows the itinerary carries on out of sight.
 */
export function renderRouteOverlay(
  svg: SVGSVGElement,
  project: Project,
  route: RouteDoc,
  level: number,
  kind: RouteKind,
  highlighted: boolean,
): void {
  const layer = svg.querySelector(".layer-routes");
  if (!layer) return;
  const legs = route.geometry.features;
  legs.forEach((leg, index) => {
    if (leg.properties.level !== level) return;
    const classes = `route route-${kind}${highlighted ? " route-highlighted" : ""}`;
    if (leg.geometry.type === "LineString") {
      const coords = leg.geometry.coordinates as [number, number][];
      const points = coords.map(([lon, lat]) => project(lon, lat).join(",")).join(" ");
      layer.append(el("polyline", { points, class: classes, "data-route": kind }));
      if (index > 0) {
        appendContinuation(layer, project, coords[0], legs[index - 1].properties.level);
      }
      if (index < legs.length - 1) {
        appendContinuation(layer, project, coords[coords.length - 1], legs[index + 1].properties.level);
      }
    } else if (leg.geometry.type === "Point") {
      const [lon, lat] = leg.geometry.coordinates as [number, number];
      const [x, y] = project(lon, lat);
      layer.append(el("circle", { cx: x, cy: y, r: 5, class: classes, "data-route": kind }));
    }
  });
}

function appendContinuation(
  layer: Element,
  project: Project,
  at: [number, number],
  otherLevel: unknown,
): void {
  const [x, y] = project(at[0], at[1]);
  const badge = el("g", { class: "route-continuation" });
  badge.append(el("circle", { cx: x, cy: y, r: 10 }));
  const text = el("text", { x, y: y + 3.5 });
  text.textContent = `L${String(otherLevel)}`;
  badge.append(text);
  layer.append(badge);
}

export function clearRouteOverlay(svg: SVGSVGElement): void {
  svg.querySelector(".layer-routes")?.replaceChildren();
}
