/** Shared test scaffolding: a canvas stand-in, scene fixtures, and an op body
 * schema check mirroring what the service accepts.
 */

import { expect } from "vitest";

import { UiSceneModel } from "../src/model.js";
import type { BoxDoc, ObjectDoc, OpBody, SceneDoc, Vec3 } from "../src/types.js";

/** Enough canvas for the editor: size, a no-op 2d context, no DOM. */
export function fakeCanvas(width: number, height: number): HTMLCanvasElement {
  const ctx = new Proxy(
    {},
    {
      get: () => () => undefined,
      set: () => true,
    },
  );
  const stub = {
    width,
    height,
    getContext: () => ctx,
    addEventListener: () => undefined,
  };
  return stub as unknown as HTMLCanvasElement;
}

export function makeObjectDoc(id: string, center: Vec3, halfExtents: Vec3, yaw = 0, category = "crate"): ObjectDoc {
  return {
    id,
    mesh: `meshes/${id}.obj`,
    atlas: `atlases/${id}.png`,
    box: { center, half_extents: halfExtents, yaw, category },
    transform: { t: [...center], ypr: [yaw, 0, 0], s: 1 },
    canonical_yaw_offset: 0,
  };
}

/** The scene the recorded gestures were captured against. */
export function makeSceneDoc(): SceneDoc {
  return {
    version: "1",
    room: { min: [0, 0, 0], max: [8, 3, 6] },
    style_prompt: "weathered plywood crates",
    seed: 7,
    reference_image: null,
    objects: [
      makeObjectDoc("crate-a", [2, 0.5, 2], [0.5, 0.5, 0.5]),
      makeObjectDoc("crate-b", [5.5, 0.5, 2.2], [0.6, 0.5, 0.4]),
      makeObjectDoc("crate-c", [3.5, 0.5, 4.5], [0.5, 0.5, 0.5]),
    ],
    provenance: null,
  };
}

export function seededModel(scene: SceneDoc = makeSceneDoc(), version = 0): UiSceneModel {
  const model = new UiSceneModel();
  model.adoptServerScene(scene, version);
  return model;
}

function isVec3(v: unknown): v is Vec3 {
  return Array.isArray(v) && v.length === 3 && v.every((n) => typeof n === "number" && Number.isFinite(n));
}

function checkBoxDoc(box: BoxDoc): void {
  expect(Object.keys(box).sort()).toEqual(["category", "center", "half_extents", "yaw"]);
  expect(isVec3(box.center)).toBe(true);
  expect(isVec3(box.half_extents)).toBe(true);
  expect(box.half_extents.every((h) => h > 0)).toBe(true);
  expect(Number.isFinite(box.yaw)).toBe(true);
  expect(typeof box.category).toBe("string");
}

const ALLOWED_KEYS: Record<string, string[]> = {
  move: ["op", "id", "delta"],
  rotate: ["op", "id", "yaw_delta"],
  scale: ["op", "id", "factor"],
  remove: ["op", "id"],
  clone: ["op", "id", "box", "clone_id"],
};

/** Shape check against the documented op grammar; throws on any drift. */
export function assertValidOpBody(op: OpBody): void {
  expect(typeof op.id).toBe("string");
  expect(op.id.length).toBeGreaterThan(0);
  const allowed = ALLOWED_KEYS[op.op];
  expect(allowed, `unknown op kind ${String(op.op)}`).toBeDefined();
  for (const key of Object.keys(op)) {
    expect(allowed, `unexpected key ${key} on ${op.op}`).toContain(key);
  }
  switch (op.op) {
    case "move":
      expect(isVec3(op.delta)).toBe(true);
      break;
    case "rotate":
      expect(Number.isFinite(op.yaw_delta)).toBe(true);
      break;
    case "scale":
      expect(Number.isFinite(op.factor)).toBe(true);
      expect(op.factor).toBeGreaterThan(0);
      break;
    case "remove":
      break;
    case "clone":
      checkBoxDoc(op.box);
      if (op.clone_id !== undefined) {
        expect(typeof op.clone_id).toBe("string");
        expect(op.clone_id.length).toBeGreaterThan(0);
      }
      break;
  }
}

/** Structural comparison with a tolerance on numbers. */
export function expectOpMatches(actual: unknown, expected: unknown, path = "op"): void {
  if (typeof expected === "number") {
    expect(typeof actual, path).toBe("number");
    expect(Math.abs((actual as number) - expected), `${path}: ${actual} != ${expected}`).toBeLessThan(1e-9);
  } else if (Array.isArray(expected)) {
    expect(Array.isArray(actual), path).toBe(true);
    expect((actual as unknown[]).length, path).toBe(expected.length);
    expected.forEach((item, i) => expectOpMatches((actual as unknown[])[i], item, `${path}[${i}]`));
  } else if (expected !== null && typeof expected === "object") {
    expect(Object.keys(actual as object).sort(), path).toEqual(Object.keys(expected).sort());
    for (const [key, value] of Object.entries(expected)) {
      expectOpMatches((actual as Record<string, unknown>)[key], value, `${path}.${key}`);
    }
  } else {
    expect(actual, path).toBe(expected);
  }
}
