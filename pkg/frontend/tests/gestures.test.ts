/** Contract tests: recorded pointer sequences must come out of the floor plan
 * as op bodies the service accepts, and rejected ops must roll back.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, test } from "vitest";

import { ServiceError } from "../src/api.js";
import { FloorPlanEditor } from "../src/floorplan.js";
import { cloneOp, footprintCorners, hitTestBox, rotateHandleWorld } from "../src/gestures.js";
import type { OpBody } from "../src/types.js";
import {
  assertValidOpBody,
  expectOpMatches,
  fakeCanvas,
  makeObjectDoc,
  makeSceneDoc,
  seededModel,
} from "./helpers.js";

interface RecordedEvent {
  type: "down" | "move" | "up" | "action";
  x?: number;
  y?: number;
  action?: "remove" | "clone";
}

interface RecordedSequence {
  name: string;
  events: RecordedEvent[];
  expect: unknown[];
}

const fixturePath = join(dirname(fileURLToPath(import.meta.url)), "fixtures", "gestures.json");
const fixture = JSON.parse(readFileSync(fixturePath, "utf8")) as {
  canvas: { width: number; height: number };
  sequences: RecordedSequence[];
};

function makeEditor(onSubmit?: (op: OpBody) => Promise<void>) {
  const model = seededModel();
  const editor = new FloorPlanEditor(fakeCanvas(fixture.canvas.width, fixture.canvas.height), model);
  const captured: OpBody[] = [];
  editor.onSubmitOp =
    onSubmit ??
    (async (op) => {
      captured.push(op);
    });
  const warnings: string[] = [];
  editor.onWarning = (msg) => warnings.push(msg);
  return { editor, model, captured, warnings };
}

async function replay(editor: FloorPlanEditor, events: RecordedEvent[]): Promise<void> {
  for (const ev of events) {
    if (ev.type === "down") editor.pointerDown(ev.x!, ev.y!);
    else if (ev.type === "move") editor.pointerMove(ev.x!, ev.y!);
    else if (ev.type === "up") await editor.pointerUp();
    else await editor.contextAction(ev.action!);
  }
}

describe("recorded gestures produce schema-valid op bodies", () => {
  for (const seq of fixture.sequences) {
    test(seq.name, async () => {
      const { editor, captured } = makeEditor();
      await replay(editor, seq.events);
      expect(captured.length).toBe(seq.expect.length);
      captured.forEach((op, i) => {
        assertValidOpBody(op);
        expectOpMatches(op, seq.expect[i]);
      });
    });
  }
});

describe("gesture outcomes beyond the op body", () => {
  test("a rejected move warns and leaves the scene mirror untouched", async () => {
    const { editor, model, warnings } = makeEditor(async () => {
      throw new ServiceError(409, "LayoutViolation", ["boxes crate-a and crate-b interpenetrate"]);
    });
    const before = JSON.stringify(model.current);
    editor.pointerDown(135, 137.5);
    editor.pointerMove(360, 150);
    await editor.pointerUp();
    expect(warnings.length).toBe(1);
    expect(warnings[0]).toContain("interpenetrate");
    expect(JSON.stringify(model.current)).toBe(before);
  });

  test("only one mutation can be in flight", async () => {
    let release: (() => void) | null = null;
    const submitted: OpBody[] = [];
    const { editor } = makeEditor(async (op) => {
      submitted.push(op);
      await new Promise<void>((resolve) => {
        release = resolve;
      });
    });
    editor.pointerDown(135, 137.5);
    editor.pointerMove(197.5, 137.5);
    const first = editor.pointerUp();
    // second gesture while the first is unacked: ignored
    editor.pointerDown(353.75, 150);
    editor.pointerMove(360, 200);
    await editor.pointerUp();
    expect(submitted.length).toBe(1);
    release!();
    await first;
  });

  test("selection follows clicks and clears on empty floor", async () => {
    const { editor, model } = makeEditor();
    editor.pointerDown(353.75, 150);
    await editor.pointerUp();
    expect(model.selectedId).toBe("crate-b");
    editor.pointerDown(30, 30);
    await editor.pointerUp();
    expect(model.selectedId).toBeNull();
  });
});

describe("floor-plan geometry", () => {
  test("clone falls back west when the east wall is too close", () => {
    const scene = makeSceneDoc();
    const nearWall = makeObjectDoc("crate-w", [7.4, 0.5, 3], [0.5, 0.5, 0.5]);
    scene.objects.push(nearWall);
    const op = cloneOp(nearWall, scene);
    expect(op.op).toBe("clone");
    if (op.op === "clone") {
      expect(op.box.center[0]).toBeCloseTo(7.4 - 1.15, 10);
      expect(op.box.center[2]).toBeCloseTo(3, 10);
    }
  });

  test("a quarter-turn yaw swings the footprint counter-clockwise on screen", () => {
    const box = { center: [0, 0.5, 0] as [number, number, number], half_extents: [0.5, 0.5, 0.25] as [number, number, number], yaw: Math.PI / 2, category: "crate" };
    const corners = footprintCorners(box);
    // the local +x,+z corner lands at (+hz, -hx): x tips toward -z
    const c = corners[2];
    expect(c.x).toBeCloseTo(0.25, 10);
    expect(c.z).toBeCloseTo(-0.5, 10);
  });

  test("hit testing respects yaw", () => {
    const box = { center: [0, 0.5, 0] as [number, number, number], half_extents: [1, 0.5, 0.2] as [number, number, number], yaw: Math.PI / 4, category: "crate" };
    // on the rotated long axis: inside; on the unrotated one: outside
    expect(hitTestBox(box, 0.6, -0.6)).toBe(true);
    expect(hitTestBox(box, 0.6, 0.6)).toBe(false);
  });

  test("the rotate handle tracks the box yaw", () => {
    const box = { center: [2, 0.5, 2] as [number, number, number], half_extents: [0.5, 0.5, 0.5] as [number, number, number], yaw: Math.PI / 2, category: "crate" };
    const h = rotateHandleWorld(box);
    expect(h.x).toBeCloseTo(2, 10);
    expect(h.z).toBeCloseTo(2 - 0.8, 10);
  });
});
