// Top-down scene: a pure model builder (testable) plus a canvas painter.
// The robot sits at the origin facing +x; meters map to pixels around a
// screen-centered origin. Actor positions are client-side steering state;
// whether an actor is *tracked* comes from the latest frame's users.

import type { FrameMessage } from "./protocol.js";
import { ledCss } from "./state.js";

const TWO_PI = 2 * Math.PI;

export interface AvatarPose {
  id: string;
  x: number;
  y: number;
  facingDeg: number;
}

export interface SceneActor extends AvatarPose {
  tracked: boolean;
  done: boolean;
}

export interface SceneModel {
  connected: boolean;
  haloColor: string;
  armExtended: boolean;
  armTowards: AvatarPose | null;
  fovHalfDeg: number;
  fovRangeM: number;
  actors: SceneActor[];
}

/** Matches the engine's default sensor wedge; decorative only. */
export const DEFAULT_FOV_DEG = 120;
export const FOV_RANGE_M = 4.0;

const IDLE_HALO = "rgb(64, 64, 64)";

export function buildScene(
  frame: FrameMessage | null,
  avatars: AvatarPose[],
  connected: boolean,
): SceneModel {
  const users = frame?.users ?? {};
  const actors: SceneActor[] = avatars.map((a) => ({
    ...a,
    tracked: frame !== null && a.id in users,
    done: users[a.id]?.done ?? false,
  }));
  const engaged = frame?.phase === "engaged";
  const target = frame?.target ?? null;
  return {
    connected,
    haloColor: frame && connected ? ledCss(frame) : IDLE_HALO,
    armExtended: engaged,
    armTowards: engaged && target ? (avatars.find((a) => a.id === target) ?? null) : null,
    fovHalfDeg: DEFAULT_FOV_DEG / 2,
    fovRangeM: FOV_RANGE_M,
    actors,
  };
}

export interface Viewport {
  width: number;
  height: number;
  pxPerMeter: number;
}

export function worldToScreen(v: Viewport, x: number, y: number): [number, number] {
  // +x points right, +y points up on screen; robot at the canvas center-left.
  return [v.width * 0.25 + x * v.pxPerMeter, v.height / 2 - y * v.pxPerMeter];
}

export function screenToWorld(v: Viewport, sx: number, sy: number): [number, number] {
  return [(sx - v.width * 0.25) / v.pxPerMeter, (v.height / 2 - sy) / v.pxPerMeter];
}

/** Actor under the pointer, nearest first; null when none within reach. */
export function hitTestActor(
  model: SceneModel,
  v: Viewport,
  sx: number,
  sy: number,
  radiusPx = 16,
): string | null {
  let best: string | null = null;
  let bestDist = radiusPx;
  for (const actor of model.actors) {
    const [ax, ay] = worldToScreen(v, actor.x, actor.y);
    const dist = Math.hypot(ax - sx, ay - sy);
    if (dist <= bestDist) {
      best = actor.id;
      bestDist = dist;
    }
  }
  return best;
}

export function paintScene(ctx: CanvasRenderingContext2D, model: SceneModel, v: Viewport): void {
  ctx.clearRect(0, 0, v.width, v.height);
  ctx.save();
  if (!model.connected) ctx.globalAlpha = 0.35;

  const [rx, ry] = worldToScreen(v, 0, 0);

  // sensor wedge
  const half = (model.fovHalfDeg * Math.PI) / 180;
  ctx.beginPath();
  ctx.moveTo(rx, ry);
  ctx.arc(rx, ry, model.fovRangeM * v.pxPerMeter, -half, half);
  ctx.closePath();
  ctx.fillStyle = "rgba(120, 160, 255, 0.08)";
  ctx.fill();
  ctx.strokeStyle = "rgba(120, 160, 255, 0.35)";
  ctx.stroke();

  // LED halo
  const halo = ctx.createRadialGradient(rx, ry, 4, rx, ry, 46);
  halo.addColorStop(0, model.haloColor);
  halo.addColorStop(1, "rgba(0,0,0,0)");
  ctx.fillStyle = halo;
  ctx.beginPath();
  ctx.arc(rx, ry, 46, 0, TWO_PI);
  ctx.fill();

  // robot body
  ctx.fillStyle = "#d8dce2";
  ctx.fillRect(rx - 14, ry - 11, 28, 22);
  ctx.strokeStyle = "#444";
  ctx.strokeRect(rx - 14, ry - 11, 28, 22);

  // arm: a line toward the target when extended, a stub when retracted
  ctx.strokeStyle = "#333";
  ctx.lineWidth = 4;
  ctx.beginPath();
  ctx.moveTo(rx, ry);
  if (model.armExtended && model.armTowards) {
    const [tx, ty] = worldToScreen(v, model.armTowards.x, model.armTowards.y);
    const len = Math.min(40, Math.hypot(tx - rx, ty - ry));
    const ang = Math.atan2(ty - ry, tx - rx);
    ctx.lineTo(rx + len * Math.cos(ang), ry + len * Math.sin(ang));
  } else if (model.armExtended) {
    ctx.lineTo(rx + 40, ry);
  } else {
    ctx.lineTo(rx + 10, ry);
  }
  ctx.stroke();
  ctx.lineWidth = 1;

  // actors
  for (const actor of model.actors) {
    const [ax, ay] = worldToScreen(v, actor.x, actor.y);
    ctx.beginPath();
    ctx.arc(ax, ay, 10, 0, TWO_PI);
    if (actor.tracked) {
      ctx.fillStyle = actor.done ? "#9a9a9a" : "#ff9f43";
      ctx.fill();
    }
    ctx.strokeStyle = actor.tracked ? "#7a4a10" : "#999";
    ctx.stroke();
    // facing tick
    const ang = (-actor.facingDeg * Math.PI) / 180; // screen y is flipped
    ctx.beginPath();
    ctx.moveTo(ax, ay);
    ctx.lineTo(ax + 14 * Math.cos(ang), ay + 14 * Math.sin(ang));
    ctx.stroke();
    ctx.fillStyle = "#555";
    ctx.font = "11px sans-serif";
    ctx.fillText(actor.id, ax + 12, ay - 12);
  }
  ctx.restore();
}
