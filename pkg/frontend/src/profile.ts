import {
  CHARACTERISTICS,
  PREFERENCE_LEVELS,
  type ApiProfile,
  type Characteristic,
  type LevelName,
} from "./types.js";

const STORAGE_KEY = "roomroute.profile";
const LEVEL_NAMES = new Set<string>(PREFERENCE_LEVELS.map((l) => l.name));

/** Per-characteristic preference selections, persisted locally in the browser.
 *
 * Serializes to exactly the API profile JSON: neutral selections are omitted
 * and anything missing reads back as neutral, so a round trip is lossless.
 */
export class ProfileStore {
  private levels = new Map<Characteristic, LevelName>();

  constructor(private readonly storage: Storage | null = defaultStorage()) {
    this.restore();
  }

  get(characteristic: Characteristic): LevelName {
    return this.levels.get(characteristic) ?? "neutral";
  }

  set(characteristic: Characteristic, level: LevelName): void {
    if (level === "neutral") {
      this.levels.delete(characteristic);
    } else {
      this.levels.set(characteristic, level);
    }
    this.persist();
  }

  reset(): void {
    this.levels.clear();
    this.persist();
  }

  isAllNeutral(): boolean {
    return this.levels.size === 0;
  }

  toApiProfile(): ApiProfile {
    const out: ApiProfile = {};
    for (const characteristic of CHARACTERISTICS) {
      const level = this.get(characteristic);
      if (level !== "neutral") {
        out[characteristic] = level;
      }
    }
    return out;
  }

  applyApiProfile(profile: ApiProfile): void {
    this.levels.clear();
    for (const characteristic of CHARACTERISTICS) {
      const level = profile[characteristic];
      if (level && level !== "neutral" && LEVEL_NAMES.has(level)) {
        this.levels.set(characteristic, level);
      }
    }
    this.persist();
  }

  private persist(): void {
    this.storage?.setItem(STORAGE_KEY, JSON.stringify(this.toApiProfile()));
  }

  private restore(): void {
    const raw = this.storage?.getItem(STORAGE_KEY);
    if (!raw) return;
    try {
      const parsed = JSON.parse(raw) as ApiProfile;
      this.applyApiProfile(parsed);
    } catch {
      this.storage?.removeItem(STORAGE_KEY);
    }
  }
}

function defaultStorage(): Storage | null {
  try {
    return typeof localStorage === "undefined" ? null : localStorage;
  } catch {
    return null;
  }
}
