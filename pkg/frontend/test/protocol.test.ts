import { describe, expect, it } from "vitest";

import { isFrameMessage, parseServerMessage } from "../src/protocol.js";

const frame = {
  type: "frame",
  schema: 1,
  frame: 3,
  t: 0.1,
  phase: "aware",
  target: null,
  users: { u1: { raw_p: 0.4, p: 0.38, dp_dt: 0.01, done: false } },
  sound: { volume: 0.2, frequency: 330, vibrato: 0.02, audible: true },
  led: { r: 0.4, g: 0.4, b: 0.6, intensity: 0.4 },
  events: [],
};

describe("parseServerMessage", () => {
  it("accepts a well-formed frame", () => {
    const msg = parseServerMessage(JSON.stringify(frame));
    expect(msg).not.toBeNull();
    expect(msg!.type).toBe("frame");
  });

  it("ignores unknown fields", () => {
    const withExtra = { ...frame, future_field: { nested: true } };
    expect(isFrameMessage(withExtra)).toBe(true);
  });

  it("rejects frames with missing sound", () => {
    const broken: Record<string, unknown> = { ...frame };
    delete broken.sound;
    expect(isFrameMessage(broken)).toBe(false);
  });

  it("rejects unknown phases", () => {
    expect(isFrameMessage({ ...frame, phase: "zen" })).toBe(false);
  });

  it("returns null for junk", () => {
    expect(parseServerMessage("{oops")).toBeNull();
    expect(parseServerMessage('"just a string"')).toBeNull();
    expect(parseServerMessage('{"type": "mystery"}')).toBeNull();
  });

  it("passes through hello, ack and error", () => {
    expect(parseServerMessage('{"type":"hello","schema":1,"frame_rate":30}')!.type).toBe("hello");
    expect(parseServerMessage('{"type":"ack","action":"move_actor","frame":2}')!.type).toBe("ack");
    expect(parseServerMessage('{"type":"error","reason":"nope"}')!.type).toBe("error");
  });
});
