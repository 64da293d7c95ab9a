// Replay of a recorded frame log with no server: the timeline and session
// state must reproduce the log's values exactly (server authority), and
// the rendered view must be deterministic.

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import type { FrameMessage } from "../src/protocol.js";
import { isFrameMessage } from "../src/protocol.js";
import { applyFrame, createState, ledCss } from "../src/state.js";
import { buildTimeline, phaseSegments, renderTimelineHtml } from "../src/timeline.js";

const fixtureUrl = new URL("./fixtures/frame_log.json", import.meta.url);
const frames: FrameMessage[] = JSON.parse(readFileSync(fixtureUrl, "utf-8"));

describe("recorded frame log", () => {
  it("is a valid schema-1 log", () => {
    expect(frames.length).toBeGreaterThan(100);
    for (const f of frames) expect(isFrameMessage(f)).toBe(true);
  });

  it("replays into session state without a server", () => {
    const state = createState();
    for (const f of frames) expect(applyFrame(state, f)).toBe(true);
    expect(state.latest!.frame).toBe(frames[frames.length - 1]!.frame);
  });

  it("timeline rows match the log exactly: phase, p, LED", () => {
    const rows = buildTimeline(frames);
    expect(rows.length).toBe(frames.length);
    rows.forEach((row, i) => {
      const f = frames[i]!;
      expect(row.phase).toBe(f.phase);
      expect(row.ledColor).toBe(ledCss(f));
      const target = f.target;
      if (target !== null && f.users[target]) {
        expect(row.p).toBe(f.users[target]!.p);
      }
      expect(row.volume).toBe(f.sound.volume);
      expect(row.frequency).toBe(f.sound.frequency);
    });
  });

  it("segments the fixture's aware -> engaged -> no_users narrative", () => {
    const segs = phaseSegments(buildTimeline(frames));
    expect(segs.map((s) => s.phase)).toEqual(["aware", "engaged", "no_users"]);
    const engaged = segs[1]!;
    expect(engaged.startT).toBeCloseTo(74 / 30, 6);
  });

  it("records the arm events at their logged frames", () => {
    const rows = buildTimeline(frames);
    const extend = rows.findIndex((r) => r.events.includes("extend_arm"));
    const retract = rows.findIndex((r) => r.events.includes("retract_arm"));
    expect(extend).toBe(74);
    expect(retract).toBe(130);
  });

  it("renders a deterministic timeline view", () => {
    const rows = buildTimeline(frames);
    const html = renderTimelineHtml(rows);
    expect(renderTimelineHtml(buildTimeline(frames))).toBe(html);
    expect(html).toContain('<li class="seg seg-engaged">engaged');
    expect((html.match(/<tr /g) ?? []).length).toBe(frames.length);
    expect(html).toMatchSnapshot();
  });
});
