// Timeline view over a frame log: one row per frame, grouped into phase
// segments. Used live (rolling) and for offline replay of recorded logs;
// every displayed value is copied from the frames, never derived.

import type { FrameMessage } from "./protocol.js";
import { displayedP, ledCss } from "./state.js";

export interface TimelineRow {
  frame: number;
  t: number;
  phase: string;
  p: number | null;
  ledColor: string;
  volume: number;
  frequency: number;
  vibrato: number;
  events: string[];
}

export interface PhaseSegment {
  phase: string;
  startT: number;
  endT: number;
  frames: number;
}

export function buildTimeline(frames: FrameMessage[]): TimelineRow[] {
  return frames.map((f) => ({
    frame: f.frame,
    t: f.t,
    phase: f.phase,
    p: displayedP(f),
    ledColor: ledCss(f),
    volume: f.sound.volume,
    frequency: f.sound.frequency,
    vibrato: f.sound.vibrato,
    events: f.events.map((e) => e.kind),
  }));
}

export function phaseSegments(rows: TimelineRow[]): PhaseSegment[] {
  const segments: PhaseSegment[] = [];
  for (const row of rows) {
    const last = segments[segments.length - 1];
    if (last && last.phase === row.phase) {
      last.endT = row.t;
      last.frames += 1;
    } else {
      segments.push({ phase: row.phase, startT: row.t, endT: row.t, frames: 1 });
    }
  }
  return segments;
}

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

/** Deterministic HTML for a timeline: segment summary plus per-frame rows. */
export function renderTimelineHtml(rows: TimelineRow[]): string {
  const segs = phaseSegments(rows)
    .map(
      (s) =>
        `<li class="seg seg-${esc(s.phase)}">${esc(s.phase)} ` +
        `${s.startT.toFixed(3)}s–${s.endT.toFixed(3)}s (${s.frames} frames)</li>`,
    )
    .join("");
  const body = rows
    .map((r) => {
      const p = r.p === null ? "" : r.p.toFixed(4);
      const events = r.events.join(" ");
      return (
        `<tr data-frame="${r.frame}">` +
        `<td>${r.t.toFixed(3)}</td>` +
        `<td>${esc(r.phase)}</td>` +
        `<td>${p}</td>` +
        `<td><span class="led" style="background:${esc(r.ledColor)}"></span></td>` +
        `<td>${r.volume.toFixed(3)}</td>` +
        `<td>${r.frequency.toFixed(1)}</td>` +
        `<td>${r.vibrato.toFixed(3)}</td>` +
        `<td>${esc(events)}</td>` +
        `</tr>`
      );
    })
    .join("\n");
  return (
    `<div class="timeline"><ul class="segments">${segs}</ul>` +
    `<table><thead><tr>` +
    `<th>t</th><th>phase</th><th>p</th><th>led</th>` +
    `<th>vol</th><th>freq</th><th>vib</th><th>events</th>` +
    `</tr></thead><tbody>\n${body}\n</tbody></table></div>`
  );
}
