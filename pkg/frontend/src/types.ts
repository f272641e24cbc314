/** Wire documents shared with the scene service. */

export type Vec3 = [number, number, number];

export interface BoxDoc {
  center: Vec3;
  half_extents: Vec3;
  yaw: number;
  category: string;
}

export interface TransformDoc {
  t: Vec3;
  ypr: Vec3;
  s: number;
}

export interface ObjectDoc {
  id: string;
  mesh: string;
  atlas: string;
  box: BoxDoc;
  transform: TransformDoc;
  canonical_yaw_offset: number;
}

export interface SceneDoc {
  version: string;
  room: { min: Vec3; max: Vec3 };
  style_prompt: string;
  seed: number;
  reference_image: string | null;
  objects: ObjectDoc[];
  provenance: Record<string, unknown> | null;
}

export type OpBody =
  | { op: "move"; id: string; delta: Vec3 }
  | { op: "rotate"; id: string; yaw_delta: number }
  | { op: "scale"; id: string; factor: number }
  | { op: "remove"; id: string }
  | { op: "clone"; id: string; box: BoxDoc; clone_id?: string };

export interface OpAck {
  ok: true;
  scene_version: number;
}

export interface RetextureRequest {
  objects?: string[];
  prompt?: string;
  seed?: number;
}

export type JobState = "QUEUED" | "RUNNING" | "DONE" | "FAILED";

export interface JobDoc {
  job_id: string;
  kind: string;
  state: JobState;
  progress: { done_views: number; total_views: number };
  error: string | null;
}
