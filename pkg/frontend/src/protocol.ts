// Wire types for the live service, schema 1. Mirrors docs/protocol.md in
// the engine repository; readers ignore unknown fields.

export const SCHEMA_VERSION = 1;

export type Phase = "no_users" | "aware" | "engaged";

export interface UserSignal {
  raw_p: number;
  p: number;
  dp_dt: number;
  done: boolean;
}

export interface SoundState {
  volume: number;
  frequency: number;
  vibrato: number;
  audible: boolean;
}

export interface LedState {
  r: number;
  g: number;
  b: number;
  intensity: number;
}

export interface ActuatorEvent {
  kind: string;
  user_id: string | null;
  t: number;
}

export interface FrameMessage {
  type: "frame";
  schema: number;
  frame: number;
  t: number;
  phase: Phase;
  target: string | null;
  users: Record<string, UserSignal>;
  sound: SoundState;
  led: LedState;
  events: ActuatorEvent[];
}

export interface HelloMessage {
  type: "hello";
  schema: number;
  frame_rate: number;
}

export interface AckMessage {
  type: "ack";
  action: string;
  frame: number;
}

export interface ErrorMessage {
  type: "error";
  reason: string;
  close?: boolean;
}

export type ServerMessage =
  | FrameMessage
  | HelloMessage
  | AckMessage
  | ErrorMessage
  | { type: "hello_ack"; schema: number };

export type SteerAction =
  | { action: "spawn_actor"; actor: string; x: number; y: number; facing_deg: number }
  | { action: "move_actor"; actor: string; x: number; y: number; facing_deg: number }
  | { action: "remove_actor"; actor: string }
  | { action: "treat_taken"; actor?: string }
  | {
      action: "set_config_overrides";
      map?: Record<string, number>;
      fsm?: Record<string, number>;
    };

const PHASES: readonly string[] = ["no_users", "aware", "engaged"];

function isNumber(x: unknown): x is number {
  return typeof x === "number" && Number.isFinite(x);
}

export function isFrameMessage(msg: unknown): msg is FrameMessage {
  if (typeof msg !== "object" || msg === null) return false;
  const m = msg as Record<string, unknown>;
  if (m.type !== "frame" || !isNumber(m.frame) || !isNumber(m.t)) return false;
  if (!PHASES.includes(m.phase as string)) return false;
  const sound = m.sound as Record<string, unknown> | undefined;
  const led = m.led as Record<string, unknown> | undefined;
  if (!sound || !isNumber(sound.volume) || !isNumber(sound.frequency) || !isNumber(sound.vibrato)) {
    return false;
  }
  if (!led || !isNumber(led.r) || !isNumber(led.g) || !isNumber(led.b) || !isNumber(led.intensity)) {
    return false;
  }
  if (typeof m.users !== "object" || m.users === null) return false;
  if (!Array.isArray(m.events)) return false;
  return true;
}

export function parseServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const type = (data as Record<string, unknown>).type;
  if (type === "frame") return isFrameMessage(data) ? data : null;
  if (type === "hello" || type === "hello_ack" || type === "ack" || type === "error") {
    return data as ServerMessage;
  }
  return null;
}
