import type {
  ApiProfile,
  BuildingSummary,
  FeatureCollection,
  PlaceSummary,
  RoutePlanDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    detail: string,
  ) {
    super(detail);
  }
}

export interface RouteRequestBody {
  from: string | { lon: number; lat: number; level: number };
  to: string;
  profile: ApiProfile;
  turn_penalty_m?: number;
}

async function parse<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let code = "http_error";
  let detail = `${response.status}`;
  try {
    const body = (await response.json()) as { error?: string; detail?: string };
    if (body.error) code = body.error;
    if (body.detail) detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, code, detail);
}

/** Thin fetch wrapper over the routing service; all numbers shown in the UI come from here. */
export class ApiClient {
  constructor(private readonly base: string = "") {}

  getBuildings(): Promise<BuildingSummary[]> {
    return fetch(`${this.base}/buildings`).then((r) => parse<BuildingSummary[]>(r));
  }

  getPlan(buildingId: string, level: number): Promise<FeatureCollection> {
    return fetch(`${this.base}/buildings/${encodeURIComponent(buildingId)}/levels/${level}/plan`).then(
      (r) => parse<FeatureCollection>(r),
    );
  }

  searchPlaces(buildingId: string, query: string): Promise<PlaceSummary[]> {
    const q = encodeURIComponent(query);
    return fetch(`${this.base}/buildings/${encodeURIComponent(buildingId)}/places?q=${q}`).then(
      (r) => parse<PlaceSummary[]>(r),
    );
  }

  postRoute(body: RouteRequestBody, signal?: AbortSignal): Promise<RoutePlanDoc> {
    return fetch(`${this.base}/route`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
      signal,
    }).then((r) => parse<RoutePlanDoc>(r));
  }
}
