export const CHARACTERISTICS = [
  "elevator",
  "stairs",
  "quiet_place",
  "lit_area",
  "tactile_paving",
  "automatic_door",
  "heavy_door",
  "ramp",
  "difficult_terrain",
  "construction_zone",
] as const;

export type Characteristic = (typeof CHARACTERISTICS)[number];

export const CHARACTERISTIC_LABELS: Record<Characteristic, string> = {
  elevator: "Elevators",
  stairs: "Stairs",
  quiet_place: "Quiet place",
  lit_area: "Lit area",
  tactile_paving: "Tactile paving",
  automatic_door: "Automatic door",
  heavy_door: "Heavy door",
  ramp: "Ramp",
  difficult_terrain: "Difficult terrain",
  construction_zone: "Construction zone",
};

export const PREFERENCE_LEVELS = [
  { name: "indispensable", label: "Indispensable for me" },
  { name: "want", label: "I want" },
  { name: "prefer", label: "I prefer" },
  { name: "neutral", label: "Neutral" },
  { name: "prefer_not", label: "I'd rather not" },
  { name: "do_not_want", label: "I don't want" },
  { name: "impossible", label: "Impossible for me" },
] as const;

export type LevelName = (typeof PREFERENCE_LEVELS)[number]["name"];

export type ApiProfile = Partial<Record<Characteristic, LevelName>>;

export interface BuildingSummary {
  id: string;
  name: string | null;
  levels: number[];
  places: number;
  segments: number;
  rooms: number;
}

export interface PlaceSummary {
  id: string;
  name: string | null;
  kind: string;
  level: number;
  position: [number, number];
}

export interface Feature {
  type: "Feature";
  geometry: {
    type: "Polygon" | "LineString" | "Point";
    coordinates: unknown;
  };
  properties: Record<string, unknown>;
}

export interface FeatureCollection {
  type: "FeatureCollection";
  features: Feature[];
}

export interface ViolationDoc {
  segment_id: string;
  characteristic: string;
  level: string;
}

export interface RouteDoc {
  place_ids: string[];
  segment_ids: string[];
  distance_m: number;
  cost: number;
  levels_visited: number[];
  violations: ViolationDoc[];
  geometry: FeatureCollection;
}

export type PlanStatus = "both" | "single" | "no_compliant_route" | "unreachable";

export interface RoutePlanDoc {
  status: PlanStatus;
  adapted: RouteDoc | null;
  fastest: RouteDoc | null;
}

export type RouteKind = "adapted" | "fastest";
