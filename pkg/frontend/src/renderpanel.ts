/** Perspective render view: orbit and zoom pick the camera, images come from
 * GET /render and are cached per (scene version, camera, size). A render of
 * an older scene version is never shown once a mutation has been acked.
 */

import type { SceneServiceClient } from "./api.js";
import type { UiSceneModel } from "./model.js";
import type { Vec3 } from "./types.js";

export interface OrbitState {
  azimuthDeg: number;
  elevationDeg: number;
  radius: number;
}

export const ORBIT_LIMITS = {
  minElevationDeg: 5,
  maxElevationDeg: 85,
  minRadius: 1.5,
  maxRadius: 30,
} as const;

export function clampOrbit(o: OrbitState): OrbitState {
  return {
    azimuthDeg: ((o.azimuthDeg % 360) + 360) % 360,
    elevationDeg: Math.min(ORBIT_LIMITS.maxElevationDeg, Math.max(ORBIT_LIMITS.minElevationDeg, o.elevationDeg)),
    radius: Math.min(ORBIT_LIMITS.maxRadius, Math.max(ORBIT_LIMITS.minRadius, o.radius)),
  };
}

export function orbitEye(target: Vec3, o: OrbitState): Vec3 {
  const az = (o.azimuthDeg * Math.PI) / 180;
  const el = (o.elevationDeg * Math.PI) / 180;
  return [
    target[0] + o.radius * Math.cos(el) * Math.cos(az),
    target[1] + o.radius * Math.sin(el),
    target[2] + o.radius * Math.cos(el) * Math.sin(az),
  ];
}

/** px,py,pz,lx,ly,lz,fov with fixed decimals so equal poses cache-hit. */
export function buildCameraSpec(eye: Vec3, target: Vec3, fovDeg: number): string {
  const n = (v: number) => v.toFixed(4);
  return [eye[0], eye[1], eye[2], target[0], target[1], target[2]].map(n).join(",") + `,${fovDeg.toFixed(1)}`;
}

const PLACEHOLDER_URI =
  "data:image/svg+xml," +
  encodeURIComponent(
    '<svg xmlns="http://www.w3.org/2000/svg" width="320" height="240">' +
      '<rect width="100%" height="100%" fill="#2a2a2e"/>' +
      '<text x="50%" y="50%" fill="#888" font-family="sans-serif" font-size="14" text-anchor="middle">render unavailable</text>' +
      "</svg>",
  );

export class RenderPanel {
  private readonly img: HTMLImageElement;
  private readonly client: SceneServiceClient;
  private readonly model: UiSceneModel;
  private readonly cache = new Map<string, string>(); // key -> object URL
  private orbit: OrbitState = { azimuthDeg: 35, elevationDeg: 24, radius: 7 };
  private inFlightKey: string | null = null;
  private fovDeg = 60;

  width = 480;
  height = 360;
  onStatus: ((text: string) => void) | null = null;

  constructor(img: HTMLImageElement, client: SceneServiceClient, model: UiSceneModel) {
    this.img = img;
    this.client = client;
    this.model = model;
  }

  private target(): Vec3 {
    const scene = this.model.current;
    if (!scene) return [0, 0, 0];
    return [
      (scene.room.min[0] + scene.room.max[0]) / 2,
      (scene.room.min[1] + scene.room.max[1]) / 3,
      (scene.room.min[2] + scene.room.max[2]) / 2,
    ];
  }

  cameraSpec(): string {
    return buildCameraSpec(orbitEye(this.target(), this.orbit), this.target(), this.fovDeg);
  }

  rotateBy(dAzimuthDeg: number, dElevationDeg: number): void {
    this.orbit = clampOrbit({
      ...this.orbit,
      azimuthDeg: this.orbit.azimuthDeg + dAzimuthDeg,
      elevationDeg: this.orbit.elevationDeg + dElevationDeg,
    });
    void this.refresh();
  }

  zoomBy(factor: number): void {
    this.orbit = clampOrbit({ ...this.orbit, radius: this.orbit.radius * factor });
    void this.refresh();
  }

  /** Drop cached renders of other scene versions; they are never shown again. */
  private prune(version: number): void {
    for (const [key, url] of this.cache) {
      if (!key.startsWith(`${version}|`)) {
        URL.revokeObjectURL(url);
        this.cache.delete(key);
      }
    }
  }

  async refresh(): Promise<void> {
    if (this.model.current === null) return;
    const wantedVersion = this.model.sceneVersion;
    const spec = this.cameraSpec();
    const key = `${wantedVersion}|${spec}|${this.width}x${this.height}`;
    this.prune(wantedVersion);

    const cached = this.cache.get(key);
    if (cached) {
      this.img.src = cached;
      return;
    }
    if (this.inFlightKey === key) return;
    this.inFlightKey = key;
    this.onStatus?.("rendering...");
    try {
      const result = await this.client.fetchRender(spec, this.width, this.height);
      // a mutation acked while we waited makes this frame stale
      if (result.version !== this.model.sceneVersion) return;
      const url = URL.createObjectURL(result.blob);
      this.cache.set(`${result.version}|${spec}|${this.width}x${this.height}`, url);
      this.img.src = url;
      this.onStatus?.("");
    } catch {
      this.img.src = PLACEHOLDER_URI;
      this.onStatus?.("render unavailable");
    } finally {
      if (this.inFlightKey === key) this.inFlightKey = null;
    }
  }

  /** Pointer-drag orbits, wheel zooms. */
  attachControls(surface: HTMLElement): void {
    let dragging = false;
    let last = { x: 0, y: 0 };
    surface.addEventListener("pointerdown", (ev) => {
      dragging = true;
      last = { x: ev.clientX, y: ev.clientY };
      surface.setPointerCapture?.(ev.pointerId);
    });
    surface.addEventListener("pointermove", (ev) => {
      if (!dragging) return;
      const dx = ev.clientX - last.x;
      const dy = ev.clientY - last.y;
      last = { x: ev.clientX, y: ev.clientY };
      this.rotateBy(dx * 0.5, -dy * 0.3);
    });
    surface.addEventListener("pointerup", () => {
      dragging = false;
    });
    surface.addEventListener("wheel", (ev) => {
      ev.preventDefault();
      this.zoomBy(ev.deltaY > 0 ? 1.12 : 0.89);
    });
  }
}
