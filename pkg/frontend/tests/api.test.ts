/** Client wire behavior against a stubbed fetch: URL shapes, version header
 * handling, and error decoding.
 */

import { afterEach, describe, expect, test, vi } from "vitest";

import { SceneServiceClient, ServiceError } from "../src/api.js";
import { buildCameraSpec, clampOrbit, orbitEye } from "../src/renderpanel.js";
import { makeSceneDoc } from "./helpers.js";

function jsonResponse(body: unknown, status = 200, headers: Record<string, string> = {}): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json", ...headers },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("scene service client", () => {
  test("trailing slash on the base url is dropped", () => {
    expect(new SceneServiceClient("http://x:1/").baseUrl).toBe("http://x:1");
    expect(new SceneServiceClient("http://x:1").baseUrl).toBe("http://x:1");
  });

  test("fetchScene returns the document and its version header", async () => {
    const calls: string[] = [];
    vi.stubGlobal("fetch", async (url: string) => {
      calls.push(url);
      return jsonResponse(makeSceneDoc(), 200, { "X-Scene-Version": "4" });
    });
    const snap = await new SceneServiceClient("http://x:1").fetchScene();
    expect(calls).toEqual(["http://x:1/scene"]);
    expect(snap.version).toBe(4);
    expect(snap.scene.objects.length).toBe(3);
  });

  test("postOp sends the body verbatim and decodes the ack", async () => {
    let sent: unknown = null;
    vi.stubGlobal("fetch", async (_url: string, init?: RequestInit) => {
      sent = JSON.parse(String(init?.body));
      return jsonResponse({ ok: true, scene_version: 7 });
    });
    const ack = await new SceneServiceClient("http://x:1").postOp({
      op: "move",
      id: "crate-a",
      delta: [1, 0, 0],
    });
    expect(sent).toEqual({ op: "move", id: "crate-a", delta: [1, 0, 0] });
    expect(ack.scene_version).toBe(7);
  });

  test("a layout rejection surfaces status and every violation", async () => {
    vi.stubGlobal("fetch", async () =>
      jsonResponse({ error: "LayoutViolation", detail: ["boxes a and b interpenetrate", "box c outside the room"] }, 409),
    );
    const err = await new SceneServiceClient("http://x:1")
      .postOp({ op: "remove", id: "crate-a" })
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ServiceError);
    const se = err as ServiceError;
    expect(se.status).toBe(409);
    expect(se.detail).toEqual(["boxes a and b interpenetrate", "box c outside the room"]);
    expect(se.message).toContain("interpenetrate");
    expect(se.message).toContain("outside the room");
  });

  test("a non-json error body still raises with the status", async () => {
    vi.stubGlobal("fetch", async () => new Response("<html>bad gateway</html>", { status: 502, statusText: "Bad Gateway" }));
    const err = await new SceneServiceClient("http://x:1").fetchScene().catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect((err as ServiceError).status).toBe(502);
  });

  test("render and atlas urls are built with encoded parameters", () => {
    const client = new SceneServiceClient("http://x:1");
    const url = client.renderUrl("1,2,3,4,5,6,60", 192, 144);
    expect(url).toBe("http://x:1/render?cam=1%2C2%2C3%2C4%2C5%2C6%2C60&w=192&h=144");
    expect(client.atlasUrl("crate a")).toBe("http://x:1/objects/crate%20a/atlas");
  });

  test("startRetexture posts the request and returns the job id", async () => {
    let sent: unknown = null;
    let url = "";
    vi.stubGlobal("fetch", async (u: string, init?: RequestInit) => {
      url = u;
      sent = JSON.parse(String(init?.body));
      return jsonResponse({ job_id: "abc123def456" });
    });
    const jobId = await new SceneServiceClient("http://x:1").startRetexture({
      objects: ["crate-a"],
      prompt: "molten copper",
      seed: 11,
    });
    expect(url).toBe("http://x:1/scene/retexture");
    expect(sent).toEqual({ objects: ["crate-a"], prompt: "molten copper", seed: 11 });
    expect(jobId).toBe("abc123def456");
  });
});

describe("camera math", () => {
  test("the camera spec has seven comma-separated finite numbers", () => {
    const spec = buildCameraSpec([1.5, 2, 8.25], [4, 1, 3], 60);
    const parts = spec.split(",");
    expect(parts.length).toBe(7);
    for (const p of parts) expect(Number.isFinite(Number(p))).toBe(true);
    expect(Number(parts[6])).toBe(60);
  });

  test("identical poses produce identical specs for cache hits", () => {
    const a = buildCameraSpec(orbitEye([4, 1, 3], { azimuthDeg: 35, elevationDeg: 24, radius: 7 }), [4, 1, 3], 60);
    const b = buildCameraSpec(orbitEye([4, 1, 3], { azimuthDeg: 35, elevationDeg: 24, radius: 7 }), [4, 1, 3], 60);
    expect(a).toBe(b);
  });

  test("orbit state is clamped to sane bounds", () => {
    const o = clampOrbit({ azimuthDeg: 725, elevationDeg: 120, radius: 0.01 });
    expect(o.azimuthDeg).toBeCloseTo(5, 10);
    expect(o.elevationDeg).toBe(85);
    expect(o.radius).toBe(1.5);
  });

  test("the eye orbits the target at the requested radius", () => {
    const eye = orbitEye([4, 1, 3], { azimuthDeg: 90, elevationDeg: 0, radius: 5 });
    expect(eye[0]).toBeCloseTo(4, 10);
    expect(eye[1]).toBeCloseTo(1, 10);
    expect(eye[2]).toBeCloseTo(8, 10);
  });
});
