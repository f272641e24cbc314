/** Top-down floor plan: drag to move, handle to rotate, context actions for
 * remove and clone. Every completed gesture becomes one op POST; the box is
 * drawn optimistically at its gesture pose until the server answers, then
 * either the refreshed scene confirms it or it snaps back with a warning.
 */

import {
  cloneOp,
  footprintCorners,
  hitTestBox,
  moveOp,
  pointerYaw,
  removeOp,
  rotateHandleWorld,
  rotateOp,
  screenToWorld,
  worldToScreen,
  wrapAngle,
  pixelsPerMeter,
  type FloorPoint,
  type Viewport,
} from "./gestures.js";
import type { UiSceneModel } from "./model.js";
import type { BoxDoc, ObjectDoc, OpBody } from "./types.js";

const COLORS = {
  floor: "#f4f1ea",
  grid: "#e0dcd2",
  wall: "#5c5347",
  box: "#b9c4d6",
  boxEdge: "#46536b",
  selected: "#3b6fd4",
  ghost: "rgba(59, 111, 212, 0.35)",
  handle: "#d46a3b",
  label: "#333333",
} as const;

const PADDING_PX = 10;
const HANDLE_RADIUS_PX = 6;
const HANDLE_HIT_PX = 10;
const CLICK_SLOP_PX = 3;
const MIN_YAW_DELTA = 1e-3;

type DragState =
  | {
      kind: "move";
      id: string;
      startWorld: FloorPoint;
      curWorld: FloorPoint;
      maxTravelPx: number;
      lastScreen: { x: number; y: number };
    }
  | { kind: "rotate"; id: string; startYaw: number; curYaw: number };

interface GhostPose {
  id: string;
  center: FloorPoint;
  yaw: number;
}

export class FloorPlanEditor {
  private readonly canvas: HTMLCanvasElement;
  private readonly ctx: CanvasRenderingContext2D;
  private readonly model: UiSceneModel;
  private drag: DragState | null = null;
  private ghost: GhostPose | null = null;
  private busy = false;

  /** Wired by the shell to POST the op and refresh the scene on success.
   * A throw here means the gesture was rejected and rolls back. */
  onSubmitOp: ((op: OpBody) => Promise<void>) | null = null;
  onWarning: ((message: string) => void) | null = null;
  onSelectionChange: ((id: string | null) => void) | null = null;
  /** Right-click on a box; the shell decides how to present the actions. */
  onContextMenu: ((id: string, clientX: number, clientY: number) => void) | null = null;

  constructor(canvas: HTMLCanvasElement, model: UiSceneModel) {
    this.canvas = canvas;
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("floor plan needs a 2d canvas context");
    this.ctx = ctx;
    this.model = model;
    this.setupEventListeners();
  }

  private setupEventListeners(): void {
    this.canvas.addEventListener("pointerdown", this.handlePointerDown.bind(this));
    this.canvas.addEventListener("pointermove", this.handlePointerMove.bind(this));
    this.canvas.addEventListener("pointerup", this.handlePointerUp.bind(this));
    this.canvas.addEventListener("contextmenu", this.handleContextMenu.bind(this));
  }

  private canvasPoint(ev: { clientX: number; clientY: number }): { x: number; y: number } {
    const rect = this.canvas.getBoundingClientRect();
    return { x: ev.clientX - rect.left, y: ev.clientY - rect.top };
  }

  private handlePointerDown(ev: PointerEvent): void {
    if (ev.button !== 0) return;
    const p = this.canvasPoint(ev);
    this.canvas.setPointerCapture?.(ev.pointerId);
    this.pointerDown(p.x, p.y);
  }

  private handlePointerMove(ev: PointerEvent): void {
    const p = this.canvasPoint(ev);
    this.pointerMove(p.x, p.y);
  }

  private handlePointerUp(_ev: PointerEvent): void {
    void this.pointerUp();
  }

  private handleContextMenu(ev: MouseEvent): void {
    ev.preventDefault();
    const p = this.canvasPoint(ev);
    const vp = this.viewport();
    if (!vp) return;
    const w = screenToWorld(vp, p.x, p.y);
    const hit = this.objectAt(w.x, w.z);
    if (!hit) return;
    this.model.selectedId = hit.id;
    this.onSelectionChange?.(hit.id);
    this.draw();
    this.onContextMenu?.(hit.id, ev.clientX, ev.clientY);
  }

  private viewport(): Viewport | null {
    const scene = this.model.current;
    if (!scene) return null;
    return {
      canvasWidth: this.canvas.width,
      canvasHeight: this.canvas.height,
      roomMin: scene.room.min,
      roomMax: scene.room.max,
      padding: PADDING_PX,
    };
  }

  private objectAt(x: number, z: number): ObjectDoc | null {
    const objects = this.model.objects;
    // last drawn is on top, so hit test in reverse
    for (let i = objects.length - 1; i >= 0; i--) {
      if (hitTestBox(objects[i].box, x, z)) return objects[i];
    }
    return null;
  }

  /** Pointer API in canvas coordinates; the DOM handlers above feed it, and
   * tests drive it directly with recorded sequences. */
  pointerDown(sx: number, sy: number): void {
    if (this.busy) return;
    const vp = this.viewport();
    if (!vp) return;
    const world = screenToWorld(vp, sx, sy);

    const selected = this.model.selectedId ? this.model.get(this.model.selectedId) : null;
    if (selected && this.hitsRotateHandle(vp, selected.box, sx, sy)) {
      const yaw = pointerYaw(selected.box, world);
      this.drag = { kind: "rotate", id: selected.id, startYaw: yaw, curYaw: yaw };
      return;
    }

    const hit = this.objectAt(world.x, world.z);
    if ((hit?.id ?? null) !== this.model.selectedId) {
      this.model.selectedId = hit?.id ?? null;
      this.onSelectionChange?.(this.model.selectedId);
    }
    if (hit) {
      this.drag = {
        kind: "move",
        id: hit.id,
        startWorld: world,
        curWorld: world,
        maxTravelPx: 0,
        lastScreen: { x: sx, y: sy },
      };
    }
    this.draw();
  }

  pointerMove(sx: number, sy: number): void {
    const drag = this.drag;
    const vp = this.viewport();
    if (!drag || !vp) return;
    const world = screenToWorld(vp, sx, sy);
    if (drag.kind === "move") {
      drag.curWorld = world;
      drag.maxTravelPx = Math.max(
        drag.maxTravelPx,
        Math.hypot(sx - drag.lastScreen.x, sy - drag.lastScreen.y),
      );
    } else {
      const rec = this.model.get(drag.id);
      if (rec) drag.curYaw = pointerYaw(rec.box, world);
    }
    this.draw();
  }

  async pointerUp(): Promise<void> {
    const drag = this.drag;
    this.drag = null;
    if (!drag) return;
    const op = this.opFromDrag(drag);
    if (!op) {
      this.draw();
      return;
    }
    this.ghost = this.ghostFromDrag(drag);
    await this.submit(op);
  }

  /** Remove or clone whatever is selected. */
  async contextAction(action: "remove" | "clone"): Promise<void> {
    if (this.busy) return;
    const id = this.model.selectedId;
    const scene = this.model.current;
    if (!id || !scene) return;
    const rec = this.model.get(id);
    if (!rec) return;
    const op = action === "remove" ? removeOp(id) : cloneOp(rec, scene);
    await this.submit(op);
  }

  private async submit(op: OpBody): Promise<void> {
    if (!this.onSubmitOp) {
      this.ghost = null;
      this.draw();
      return;
    }
    this.busy = true;
    this.draw();
    try {
      await this.onSubmitOp(op);
    } catch (err) {
      // rejected: ghost disappears, the box snaps back to the server pose
      this.onWarning?.(err instanceof Error ? err.message : String(err));
    } finally {
      this.busy = false;
      this.ghost = null;
      this.draw();
    }
  }

  private opFromDrag(drag: DragState): OpBody | null {
    if (drag.kind === "move") {
      if (drag.maxTravelPx < CLICK_SLOP_PX) return null; // a click, not a drag
      const dx = drag.curWorld.x - drag.startWorld.x;
      const dz = drag.curWorld.z - drag.startWorld.z;
      return moveOp(drag.id, dx, dz);
    }
    const delta = wrapAngle(drag.curYaw - drag.startYaw);
    if (Math.abs(delta) < MIN_YAW_DELTA) return null;
    return rotateOp(drag.id, delta);
  }

  private ghostFromDrag(drag: DragState): GhostPose | null {
    const rec = this.model.get(drag.id);
    if (!rec) return null;
    if (drag.kind === "move") {
      return {
        id: drag.id,
        center: {
          x: rec.box.center[0] + (drag.curWorld.x - drag.startWorld.x),
          z: rec.box.center[2] + (drag.curWorld.z - drag.startWorld.z),
        },
        yaw: rec.box.yaw,
      };
    }
    return {
      id: drag.id,
      center: { x: rec.box.center[0], z: rec.box.center[2] },
      yaw: wrapAngle(rec.box.yaw + wrapAngle(drag.curYaw - drag.startYaw)),
    };
  }

  private hitsRotateHandle(vp: Viewport, box: BoxDoc, sx: number, sy: number): boolean {
    const h = rotateHandleWorld(box);
    const hs = worldToScreen(vp, h.x, h.z);
    return Math.hypot(sx - hs.x, sy - hs.y) <= HANDLE_HIT_PX;
  }

  private ghostBox(rec: ObjectDoc, pose: GhostPose): BoxDoc {
    return {
      center: [pose.center.x, rec.box.center[1], pose.center.z],
      half_extents: rec.box.half_extents,
      yaw: pose.yaw,
      category: rec.box.category,
    };
  }

  draw(): void {
    const ctx = this.ctx;
    const vp = this.viewport();
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    if (!vp) return;

    this.drawRoom(vp);
    const activePose = this.dragPose() ?? this.ghost;
    for (const rec of this.model.objects) {
      if (activePose && rec.id === activePose.id) {
        this.drawBox(vp, this.ghostBox(rec, activePose), rec.id, true);
      } else {
        this.drawBox(vp, rec.box, rec.id, false);
      }
    }
  }

  private dragPose(): GhostPose | null {
    return this.drag ? this.ghostFromDrag(this.drag) : null;
  }

  private drawRoom(vp: Viewport): void {
    const ctx = this.ctx;
    const a = worldToScreen(vp, vp.roomMin[0], vp.roomMin[2]);
    const b = worldToScreen(vp, vp.roomMax[0], vp.roomMax[2]);
    ctx.fillStyle = COLORS.floor;
    ctx.fillRect(a.x, a.y, b.x - a.x, b.y - a.y);

    ctx.strokeStyle = COLORS.grid;
    ctx.lineWidth = 1;
    for (let x = Math.ceil(vp.roomMin[0]); x <= vp.roomMax[0]; x++) {
      const p = worldToScreen(vp, x, vp.roomMin[2]);
      ctx.beginPath();
      ctx.moveTo(p.x, a.y);
      ctx.lineTo(p.x, b.y);
      ctx.stroke();
    }
    for (let z = Math.ceil(vp.roomMin[2]); z <= vp.roomMax[2]; z++) {
      const p = worldToScreen(vp, vp.roomMin[0], z);
      ctx.beginPath();
      ctx.moveTo(a.x, p.y);
      ctx.lineTo(b.x, p.y);
      ctx.stroke();
    }

    ctx.strokeStyle = COLORS.wall;
    ctx.lineWidth = 2;
    ctx.strokeRect(a.x, a.y, b.x - a.x, b.y - a.y);
  }

  private drawBox(vp: Viewport, box: BoxDoc, id: string, isGhost: boolean): void {
    const ctx = this.ctx;
    const corners = footprintCorners(box).map((c) => worldToScreen(vp, c.x, c.z));
    const selected = id === this.model.selectedId;

    ctx.beginPath();
    ctx.moveTo(corners[0].x, corners[0].y);
    for (let i = 1; i < corners.length; i++) ctx.lineTo(corners[i].x, corners[i].y);
    ctx.closePath();
    ctx.fillStyle = isGhost ? COLORS.ghost : COLORS.box;
    ctx.fill();
    ctx.strokeStyle = selected ? COLORS.selected : COLORS.boxEdge;
    ctx.lineWidth = selected ? 2 : 1;
    if (isGhost) ctx.setLineDash([4, 3]);
    ctx.stroke();
    ctx.setLineDash([]);

    const c = worldToScreen(vp, box.center[0], box.center[2]);
    ctx.fillStyle = COLORS.label;
    ctx.font = "11px sans-serif";
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(box.category || id, c.x, c.y);

    if (selected && !isGhost) {
      const h = rotateHandleWorld(box);
      const hs = worldToScreen(vp, h.x, h.z);
      ctx.beginPath();
      ctx.moveTo(c.x, c.y);
      ctx.lineTo(hs.x, hs.y);
      ctx.strokeStyle = COLORS.handle;
      ctx.lineWidth = 1;
      ctx.stroke();
      ctx.beginPath();
      ctx.arc(hs.x, hs.y, HANDLE_RADIUS_PX, 0, 2 * Math.PI);
      ctx.fillStyle = COLORS.handle;
      ctx.fill();
    }
  }

  /** Meters spanned by one pixel at the current zoom, for status readouts. */
  metersPerPixel(): number {
    const vp = this.viewport();
    return vp ? 1 / pixelsPerMeter(vp) : 0;
  }
}
