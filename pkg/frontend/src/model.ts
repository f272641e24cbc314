/** Client-side mirror of the served scene.
 *
 * The scene snapshot and its version only ever change through
 * adoptServerScene, i.e. from a server response. Selection and the pending
 * job id are client-side state layered on top.
 */

import type { ObjectDoc, SceneDoc } from "./types.js";

export class UiSceneModel {
  private scene: SceneDoc | null = null;
  private version = -1;

  selectedId: string | null = null;
  pendingJobId: string | null = null;

  onSceneReplaced: (() => void) | null = null;

  adoptServerScene(scene: SceneDoc, version: number): void {
    this.scene = scene;
    this.version = version;
    if (this.selectedId !== null && this.get(this.selectedId) === null) {
      this.selectedId = null; // selection died with its object
    }
    this.onSceneReplaced?.();
  }

  get sceneVersion(): number {
    return this.version;
  }

  get current(): SceneDoc | null {
    return this.scene;
  }

  get objects(): readonly ObjectDoc[] {
    return this.scene?.objects ?? [];
  }

  get(objectId: string): ObjectDoc | null {
    return this.scene?.objects.find((o) => o.id === objectId) ?? null;
  }
}
