import { ApiClient, ApiError } from "./api.js";
import { clearRouteOverlay, renderPlan, renderRouteOverlay } from "./plan.js";
import { ProfileStore } from "./profile.js";
import {
  CHARACTERISTIC_LABELS,
  CHARACTERISTICS,
  PREFERENCE_LEVELS,
  type BuildingSummary,
  type Characteristic,
  type FeatureCollection,
  type LevelName,
  type RouteKind,
  type RoutePlanDoc,
} from "./types.js";

type Project = (lon: number, lat: number) => [number, number];

const LEVEL_LABELS: Record<string, string> = Object.fromEntries(
  PREFERENCE_LEVELS.map((l) => [l.name, l.label]),
);

export interface AppOptions {
  api?: ApiClient;
  storage?: Storage | null;
}

/** The single-page client: preference panel, floor plans, itinerary comparison. */
export class App {
  readonly api: ApiClient;
  readonly profile: ProfileStore;
  readonly ready: Promise<void>;

  private building: BuildingSummary | null = null;
  private level: number | null = null;
  private plan: FeatureCollection | null = null;
  private project: Project | null = null;
  private routePlan: RoutePlanDoc | null = null;
  private highlighted: RouteKind = "adapted";
  private inflight: AbortController | null = null;

  constructor(
    private readonly root: HTMLElement,
    options: AppOptions = {},
  ) {
    this.api = options.api ?? new ApiClient();
    this.profile = new ProfileStore(options.storage);
    this.renderShell();
    this.ready = this.init();
  }

  private query<T extends Element>(selector: string): T {
    const node = this.root.querySelector<T>(selector);
    if (!node) throw new Error(`missing UI element: ${selector}`);
    return node;
  }

  private renderShell(): void {
    this.root.innerHTML = `
      <header class="topbar">
        <h1>roomroute</h1>
        <select class="building-select" aria-label="Building"></select>
        <nav class="level-switcher" aria-label="Level"></nav>
      </header>
      <div class="content">
        <aside class="sidebar">
          <section class="endpoints">
            <input class="from-input" list="place-options" placeholder="From: room or place id" aria-label="From">
            <input class="to-input" list="place-options" placeholder="To: room or place id" aria-label="To">
            <datalist id="place-options"></datalist>
            <button class="go-button" type="button">Find route</button>
          </section>
          <section class="route-info hidden">
            <div class="route-status"></div>
            <div class="route-toggle hidden" role="group" aria-label="Compare itineraries">
              <button class="toggle-adapted active" type="button">Adapted</button>
              <button class="toggle-fastest" type="button">Fastest</button>
            </div>
            <ul class="route-distances"></ul>
            <div class="violation-notice hidden" role="alert"></div>
          </section>
          <section class="profile-panel">
            <h2>My route settings</h2>
          </section>
        </aside>
        <main class="map-area">
          <div class="error-banner hidden" role="alert"></div>
          <svg class="plan-svg" role="img" aria-label="Floor plan"></svg>
        </main>
      </div>`;

    const panel = this.query<HTMLElement>(".profile-panel");
    for (const characteristic of CHARACTERISTICS) {
      const label = document.createElement("label");
      label.className = "criterion";
      const span = document.createElement("span");
      span.textContent = CHARACTERISTIC_LABELS[characteristic];
      const select = document.createElement("select");
      select.dataset.characteristic = characteristic;
      for (const level of PREFERENCE_LEVELS) {
        const option = document.createElement("option");
        option.value = level.name;
        option.textContent = level.label;
        select.append(option);
      }
      select.value = this.profile.get(characteristic);
      select.addEventListener("change", () => {
        this.profile.set(characteristic, select.value as LevelName);
        void this.onProfileChanged();
      });
      label.append(span, select);
      panel.append(label);
    }

    this.query<HTMLButtonElement>(".go-button").addEventListener("click", () => {
      void this.submitRoute();
    });
    this.query<HTMLButtonElement>(".toggle-adapted").addEventListener("click", () => {
      this.selectRoute("adapted");
    });
    this.query<HTMLButtonElement>(".toggle-fastest").addEventListener("click", () => {
      this.selectRoute("fastest");
    });
    for (const selector of [".from-input", ".to-input"]) {
      const input = this.query<HTMLInputElement>(selector);
      input.addEventListener("input", () => {
        void this.refreshSuggestions(input.value);
      });
    }
    this.query<HTMLSelectElement>(".building-select").addEventListener("change", (event) => {
      const id = (event.target as HTMLSelectElement).value;
      void this.selectBuilding(id);
    });
  }

  private async init(): Promise<void> {
    let buildings: BuildingSummary[];
    try {
      buildings = await this.api.getBuildings();
    } catch (error) {
      this.showError(`Cannot reach the routing service: ${describe(error)}`);
      return;
    }
    const select = this.query<HTMLSelectElement>(".building-select");
    select.replaceChildren(
      ...buildings.map((b) => {
        const option = document.createElement("option");
        option.value = b.id;
        option.textContent = b.name ?? b.id;
        return option;
      }),
    );
    if (buildings.length > 0) {
      await this.selectBuilding(buildings[0].id, buildings);
    }
  }

  private async selectBuilding(id: string, known?: BuildingSummary[]): Promise<void> {
    const buildings = known ?? (await this.api.getBuildings().catch(() => []));
    this.building = buildings.find((b) => b.id === id) ?? null;
    if (!this.building) return;
    const switcher = this.query<HTMLElement>(".level-switcher");
    switcher.replaceChildren(
      ...this.building.levels.map((level) => {
        const button = document.createElement("button");
        button.type = "button";
        button.dataset.level = String(level);
        button.textContent = `Level ${level}`;
        button.addEventListener("click", () => void this.showLevel(level));
        return button;
      }),
    );
    await this.showLevel(this.building.levels[0] ?? 0);
  }

  /** Fetch and draw one floor; the selected route survives level switches. */
  async showLevel(level: number): Promise<void> {
    if (!this.building) return;
    let plan: FeatureCollection;
    try {
      plan = await this.api.getPlan(this.building.id, level);
    } catch (error) {
      this.plan = null;
      this.query<SVGSVGElement>(".plan-svg").replaceChildren();
      this.showError(`Cannot load the level ${level} plan: ${describe(error)}`);
      return;
    }
    this.clearError();
    this.level = level;
    this.plan = plan;
    for (const button of this.root.querySelectorAll<HTMLButtonElement>(".level-switcher button")) {
      button.classList.toggle("active", button.dataset.level === String(level));
    }
    const svg = this.query<SVGSVGElement>(".plan-svg");
    this.project = renderPlan(svg, plan);
    if (plan.features.length === 0) {
      this.showError(`Nothing is mapped on level ${level} yet.`);
    }
    this.drawRoutes();
  }

  private async refreshSuggestions(value: string): Promise<void> {
    if (!this.building || value.length < 1) return;
    try {
      const places = await this.api.searchPlaces(this.building.id, value);
      this.query<HTMLDataListElement>("#place-options").replaceChildren(
        ...places.map((place) => {
          const option = document.createElement("option");
          option.value = place.name ?? place.id;
          option.label = `${place.name ?? place.id} (level ${place.level})`;
          return option;
        }),
      );
    } catch {
      // suggestions are best-effort; routing reports real errors
    }
  }

  private endpoints(): { from: string; to: string } | null {
    const from = this.query<HTMLInputElement>(".from-input").value.trim();
    const to = this.query<HTMLInputElement>(".to-input").value.trim();
    return from && to ? { from, to } : null;
  }

  private async onProfileChanged(): Promise<void> {
    // the what-if loop: any selector change re-queries immediately
    if (this.endpoints()) {
      await this.submitRoute();
    }
  }

  /** Ask the service for itineraries; a newer request cancels the one in flight. */
  async submitRoute(): Promise<void> {
    const endpoints = this.endpoints();
    if (!endpoints) {
      this.showError("Pick both a start and a destination first.");
      return;
    }
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const plan = await this.api.postRoute(
        { from: endpoints.from, to: endpoints.to, profile: this.profile.toApiProfile() },
        controller.signal,
      );
      if (this.inflight !== controller) return; // a newer request won
      this.routePlan = plan;
      this.highlighted = "adapted";
      this.clearError();
      this.renderRouteInfo();
      this.drawRoutes();
    } catch (error) {
      if (isAbort(error)) return;
      this.routePlan = null;
      this.renderRouteInfo();
      this.drawRoutes();
      this.showError(describe(error));
    } finally {
      if (this.inflight === controller) {
        this.inflight = null;
      }
    }
  }

  selectRoute(kind: RouteKind): void {
    this.highlighted = kind;
    this.renderRouteInfo();
    this.drawRoutes();
  }

  private renderRouteInfo(): void {
    const info = this.query<HTMLElement>(".route-info");
    const status = this.query<HTMLElement>(".route-status");
    const toggle = this.query<HTMLElement>(".route-toggle");
    const distances = this.query<HTMLElement>(".route-distances");
    const notice = this.query<HTMLElement>(".violation-notice");

    const plan = this.routePlan;
    if (!plan) {
      info.classList.add("hidden");
      return;
    }
    info.classList.remove("hidden");
    toggle.classList.toggle("hidden", plan.status !== "both");
    this.query<HTMLButtonElement>(".toggle-adapted").classList.toggle(
      "active",
      this.highlighted === "adapted",
    );
    this.query<HTMLButtonElement>(".toggle-fastest").classList.toggle(
      "active",
      this.highlighted === "fastest",
    );

    const rows: string[] = [];
    if (plan.adapted) {
      rows.push(`<li class="distance-adapted">Adapted: ${formatDistance(plan.adapted.distance_m)}</li>`);
    }
    if (plan.fastest) {
      rows.push(`<li class="distance-fastest">Fastest: ${formatDistance(plan.fastest.distance_m)}</li>`);
    }
    distances.innerHTML = rows.join("");

    const statusText: Record<string, string> = {
      both: "Your adapted itinerary, with the faster one for comparison.",
      single: "One itinerary fits; nothing faster to compare.",
      no_compliant_route: "No itinerary respects your settings; showing the fastest anyway.",
      unreachable: "No itinerary exists between these places.",
    };
    status.textContent = statusText[plan.status] ?? plan.status;

    const flagged = plan.fastest?.violations ?? [];
    if (plan.status === "no_compliant_route" && flagged.length > 0) {
      const unique = new Map<string, string>();
      for (const violation of flagged) {
        const characteristic =
          CHARACTERISTIC_LABELS[violation.characteristic as Characteristic] ?? violation.characteristic;
        unique.set(violation.characteristic + violation.level, `${characteristic} — ${LEVEL_LABELS[violation.level] ?? violation.level}`);
      }
      notice.textContent = `This route conflicts with your settings: ${[...unique.values()].join(", ")}`;
      notice.classList.remove("hidden");
    } else {
      notice.classList.add("hidden");
      notice.textContent = "";
    }
  }

  private drawRoutes(): void {
    const svg = this.query<SVGSVGElement>(".plan-svg");
    clearRouteOverlay(svg);
    if (!this.routePlan || !this.project || this.level === null) return;
    const order: RouteKind[] = this.highlighted === "adapted" ? ["fastest", "adapted"] : ["adapted", "fastest"];
    for (const kind of order) {
      const route = this.routePlan[kind];
      if (!route) continue;
      renderRouteOverlay(svg, this.project, route, this.level, kind, kind === this.highlighted);
    }
  }

  private showError(message: string): void {
    const banner = this.query<HTMLElement>(".error-banner");
    banner.textContent = message;
    banner.classList.remove("hidden");
  }

  private clearError(): void {
    const banner = this.query<HTMLElement>(".error-banner");
    banner.textContent = "";
    banner.classList.add("hidden");
  }
}

function formatDistance(meters: number): string {
  return meters >= 1000 ? `${(meters / 1000).toFixed(2)} km` : `${meters.toFixed(1)} m`;
}

function describe(error: unknown): string {
  if (error instanceof ApiError) {
    return `${error.code}: ${error.message}`;
  }
  return error instanceof Error ? error.message : String(error);
}

function isAbort(error: unknown): boolean {
  return error instanceof DOMException && error.name === "AbortError";
}

export function createApp(root: HTMLElement, options: AppOptions = {}): App {
  return new App(root, options);
}
