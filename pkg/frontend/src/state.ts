// Client session state. Everything displayed comes verbatim from
// FrameMessages: the client never recomputes p, phase, or LED color.

import type { ActuatorEvent, FrameMessage } from "./protocol.js";

export const BUFFER_WINDOW_S = 30;

export interface SeriesPoint {
  t: number;
  v: number;
}

export class RollingBuffer {
  readonly points: SeriesPoint[] = [];

  constructor(private windowS: number = BUFFER_WINDOW_S) {}

  push(t: number, v: number): void {
    this.points.push({ t, v });
    const cutoff = t - this.windowS;
    let drop = 0;
    while (drop < this.points.length && this.points[drop]!.t < cutoff) drop++;
    if (drop > 0) this.points.splice(0, drop);
  }

  get length(): number {
    return this.points.length;
  }

  latest(): SeriesPoint | null {
    return this.points.length ? this.points[this.points.length - 1]! : null;
  }
}

export type ConnectionStatus = "connecting" | "connected" | "disconnected";

export interface UiSessionState {
  status: ConnectionStatus;
  latest: FrameMessage | null;
  p: RollingBuffer;
  frequency: RollingBuffer;
  volume: RollingBuffer;
  vibrato: RollingBuffer;
  recentEvents: ActuatorEvent[];
}

export function createState(): UiSessionState {
  return {
    status: "connecting",
    latest: null,
    p: new RollingBuffer(),
    frequency: new RollingBuffer(),
    volume: new RollingBuffer(),
    vibrato: new RollingBuffer(),
    recentEvents: [],
  };
}

/** p that the charts display: the server's target, else the hottest user.
 *  Values come straight from the frame; only the pick is a display choice. */
export function displayedP(frame: FrameMessage): number | null {
  if (frame.target !== null && frame.users[frame.target] !== undefined) {
    return frame.users[frame.target]!.p;
  }
  let best: number | null = null;
  for (const sig of Object.values(frame.users)) {
    if (best === null || sig.p > best) best = sig.p;
  }
  return best;
}

/** Apply one inbound frame atomically; stale or replayed frames are ignored. */
export function applyFrame(state: UiSessionState, frame: FrameMessage): boolean {
  if (state.latest !== null && frame.frame <= state.latest.frame) {
    return false;
  }
  state.latest = frame;
  const p = displayedP(frame);
  if (p !== null) state.p.push(frame.t, p);
  state.frequency.push(frame.t, frame.sound.frequency);
  state.volume.push(frame.t, frame.sound.audible ? frame.sound.volume : 0);
  state.vibrato.push(frame.t, frame.sound.vibrato);
  if (frame.events.length) {
    state.recentEvents.push(...frame.events);
    if (state.recentEvents.length > 50) {
      state.recentEvents.splice(0, state.recentEvents.length - 50);
    }
  }
  return true;
}

export function ledCss(frame: FrameMessage): string {
  const { r, g, b, intensity } = frame.led;
  const scale = (c: number) => Math.round(255 * Math.min(1, Math.max(0, c * intensity)));
  return `rgb(${scale(r)}, ${scale(g)}, ${scale(b)})`;
}
