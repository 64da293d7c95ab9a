// Tuning sliders: the sound-map endpoints and the FSM thresholds. Commits
// become set_config_overrides steers; a server rejection reverts the
// slider to its last accepted value.

import type { SteerAction } from "./protocol.js";

export interface SliderSpec {
  section: "map" | "fsm";
  field: string;
  label: string;
  min: number;
  max: number;
  step: number;
  initial: number;
}

export const SLIDERS: SliderSpec[] = [
  { section: "fsm", field: "p_on", label: "activation threshold", min: 0.1, max: 1.0, step: 0.01, initial: 0.85 },
  { section: "fsm", field: "p_off", label: "release threshold", min: 0.05, max: 0.95, step: 0.01, initial: 0.75 },
  { section: "fsm", field: "release_hold_s", label: "release hold (s)", min: 0.1, max: 3.0, step: 0.1, initial: 1.0 },
  { section: "map", field: "p_knee", label: "awareness knee", min: 0.05, max: 0.6, step: 0.01, initial: 0.2 },
  { section: "map", field: "f_floor_hz", label: "pitch floor (Hz)", min: 80, max: 600, step: 5, initial: 220 },
  { section: "map", field: "f_max_hz", label: "pitch max (Hz)", min: 300, max: 2000, step: 5, initial: 880 },
  { section: "map", field: "vol_floor", label: "volume floor", min: 0.0, max: 0.5, step: 0.01, initial: 0.1 },
  { section: "map", field: "vol_max", label: "volume max", min: 0.2, max: 1.0, step: 0.01, initial: 0.9 },
  { section: "map", field: "v_base", label: "vibrato baseline", min: 0.0, max: 0.1, step: 0.005, initial: 0.02 },
  { section: "map", field: "v_max", label: "vibrato max", min: 0.05, max: 0.5, step: 0.01, initial: 0.2 },
  { section: "map", field: "rate_sat", label: "vibrato saturation (1/s)", min: -2.0, max: -0.1, step: 0.05, initial: -0.5 },
];

const THRESHOLD_GAP = 0.05;

/** Build the override payload for one slider commit.
 *
 * The engine enforces p_off < p_on, so dragging one threshold across the
 * other moves both in a single message.
 */
export function buildOverride(
  spec: SliderSpec,
  value: number,
  current: { p_on: number; p_off: number },
): SteerAction {
  const round2 = (x: number) => Math.round(x * 100) / 100;
  const fields: Record<string, number> = { [spec.field]: value };
  if (spec.section === "fsm" && spec.field === "p_on" && value <= current.p_off) {
    fields.p_off = round2(Math.max(0.01, value - THRESHOLD_GAP));
  }
  if (spec.section === "fsm" && spec.field === "p_off" && value >= current.p_on) {
    fields.p_on = round2(Math.min(1.0, value + THRESHOLD_GAP));
  }
  return spec.section === "map"
    ? { action: "set_config_overrides", map: fields }
    : { action: "set_config_overrides", fsm: fields };
}

export interface SliderPort {
  sendSteer(steer: SteerAction): void;
}

/** Tracks accepted values and handles commit/revert for all sliders. */
export class SliderPanel {
  readonly accepted = new Map<string, number>();
  private pending: { snapshot: Map<string, number>; key: string } | null = null;

  constructor(private port: SliderPort) {
    for (const spec of SLIDERS) this.accepted.set(key(spec), spec.initial);
  }

  thresholds(): { p_on: number; p_off: number } {
    return {
      p_on: this.accepted.get("fsm.p_on") ?? 0.85,
      p_off: this.accepted.get("fsm.p_off") ?? 0.75,
    };
  }

  commit(spec: SliderSpec, value: number): void {
    const steer = buildOverride(spec, value, this.thresholds());
    // Optimistically record every field the payload carries; a rejection
    // restores the snapshot via onRejected.
    this.pending = { snapshot: new Map(this.accepted), key: key(spec) };
    if (steer.action === "set_config_overrides") {
      for (const [field, v] of Object.entries(steer.map ?? {})) {
        this.accepted.set(`map.${field}`, v);
      }
      for (const [field, v] of Object.entries(steer.fsm ?? {})) {
        this.accepted.set(`fsm.${field}`, v);
      }
    }
    this.port.sendSteer(steer);
  }

  /** Server rejected the in-flight commit: return the slider value to show. */
  onRejected(): { key: string; value: number } | null {
    if (this.pending === null) return null;
    const { snapshot, key: k } = this.pending;
    this.pending = null;
    this.accepted.clear();
    for (const [field, v] of snapshot) this.accepted.set(field, v);
    return { key: k, value: this.accepted.get(k) ?? 0 };
  }

  onAccepted(): void {
    this.pending = null;
  }
}

export function key(spec: SliderSpec): string {
  return `${spec.section}.${spec.field}`;
}
