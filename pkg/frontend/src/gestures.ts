/** Pure floor-plan geometry: world/screen mapping, hit tests, gesture-to-op
 * conversion. The engine's yaw rotates the local +x axis toward -z, which in
 * a top-down view (x right, z down) reads as counter-clockwise.
 */

import type { BoxDoc, ObjectDoc, OpBody, SceneDoc, Vec3 } from "./types.js";

export const ROTATE_HANDLE_OFFSET_M = 0.3;
export const CLONE_GAP_M = 0.15;

export interface Viewport {
  canvasWidth: number;
  canvasHeight: number;
  roomMin: Vec3;
  roomMax: Vec3;
  padding: number;
}

export interface ScreenPoint {
  x: number;
  y: number;
}

export interface FloorPoint {
  x: number;
  z: number;
}

/** Pixels per meter, uniform in x and z so boxes stay to scale. */
export function pixelsPerMeter(vp: Viewport): number {
  const roomW = vp.roomMax[0] - vp.roomMin[0];
  const roomD = vp.roomMax[2] - vp.roomMin[2];
  return Math.min(
    (vp.canvasWidth - 2 * vp.padding) / roomW,
    (vp.canvasHeight - 2 * vp.padding) / roomD,
  );
}

function origin(vp: Viewport): ScreenPoint {
  const s = pixelsPerMeter(vp);
  const roomW = vp.roomMax[0] - vp.roomMin[0];
  const roomD = vp.roomMax[2] - vp.roomMin[2];
  return {
    x: (vp.canvasWidth - roomW * s) / 2,
    y: (vp.canvasHeight - roomD * s) / 2,
  };
}

export function worldToScreen(vp: Viewport, x: number, z: number): ScreenPoint {
  const s = pixelsPerMeter(vp);
  const o = origin(vp);
  return { x: o.x + (x - vp.roomMin[0]) * s, y: o.y + (z - vp.roomMin[2]) * s };
}

export function screenToWorld(vp: Viewport, sx: number, sy: number): FloorPoint {
  const s = pixelsPerMeter(vp);
  const o = origin(vp);
  return { x: vp.roomMin[0] + (sx - o.x) / s, z: vp.roomMin[2] + (sy - o.y) / s };
}

export function wrapAngle(a: number): number {
  const TWO_PI = 2 * Math.PI;
  let w = a - TWO_PI * Math.ceil((a - Math.PI) / TWO_PI);
  if (w <= -Math.PI) w += TWO_PI;
  return w;
}

/** The 4 footprint corners of a yawed box in the xz plane. */
export function footprintCorners(box: BoxDoc): FloorPoint[] {
  const [cx, , cz] = box.center;
  const [hx, , hz] = box.half_extents;
  const c = Math.cos(box.yaw);
  const s = Math.sin(box.yaw);
  const out: FloorPoint[] = [];
  for (const [sx, sz] of [[-1, -1], [1, -1], [1, 1], [-1, 1]] as const) {
    const lx = sx * hx;
    const lz = sz * hz;
    out.push({ x: cx + c * lx + s * lz, z: cz - s * lx + c * lz });
  }
  return out;
}

export function hitTestBox(box: BoxDoc, x: number, z: number): boolean {
  const wx = x - box.center[0];
  const wz = z - box.center[2];
  const c = Math.cos(box.yaw);
  const s = Math.sin(box.yaw);
  const lx = c * wx - s * wz;
  const lz = s * wx + c * wz;
  return Math.abs(lx) <= box.half_extents[0] && Math.abs(lz) <= box.half_extents[2];
}

/** Where the rotate handle sits: off the box's local +x face. */
export function rotateHandleWorld(box: BoxDoc): FloorPoint {
  const d = box.half_extents[0] + ROTATE_HANDLE_OFFSET_M;
  return {
    x: box.center[0] + Math.cos(box.yaw) * d,
    z: box.center[2] - Math.sin(box.yaw) * d,
  };
}

/** Yaw implied by a pointer position relative to the box center. */
export function pointerYaw(box: BoxDoc, p: FloorPoint): number {
  return Math.atan2(-(p.z - box.center[2]), p.x - box.center[0]);
}

export function moveOp(id: string, dx: number, dz: number): OpBody {
  return { op: "move", id, delta: [dx, 0, dz] };
}

export function rotateOp(id: string, yawDelta: number): OpBody {
  return { op: "rotate", id, yaw_delta: yawDelta };
}

export function removeOp(id: string): OpBody {
  return { op: "remove", id };
}

/** Clone beside the source: east of it if the room allows, west otherwise.
 * The server still validates; a blocked spot just comes back as a rejection.
 */
export function cloneOp(source: ObjectDoc, scene: SceneDoc): OpBody {
  const box = source.box;
  const dx = 2 * box.half_extents[0] + CLONE_GAP_M;
  const east = box.center[0] + dx + box.half_extents[0];
  const shift = east <= scene.room.max[0] ? dx : -dx;
  const center: Vec3 = [box.center[0] + shift, box.center[1], box.center[2]];
  return {
    op: "clone",
    id: source.id,
    box: { center, half_extents: [...box.half_extents], yaw: box.yaw, category: box.category },
  };
}
