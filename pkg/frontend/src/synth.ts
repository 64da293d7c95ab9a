// Local synthesis mirroring the server's renderer: one sine carrier, one
// LFO modulating pitch and amplitude together, linear parameter ramps that
// land exactly on their targets. MirrorSynth is the pure sample-accurate
// core (tested against the documented equations); StudioAudio is the thin
// WebAudio graph used for actual playback in the browser.

import type { SoundState } from "./protocol.js";

const TWO_PI = 2 * Math.PI;

export class ParamRamp {
  value: number;
  target: number;
  private step = 0;
  private remaining = 0;

  constructor(value: number) {
    this.value = value;
    this.target = value;
  }

  setTarget(target: number, rampSamples: number): void {
    if (target === this.target) return; // same target: never restart the ramp
    this.target = target;
    if (rampSamples <= 0 || target === this.value) {
      this.value = target;
      this.step = 0;
      this.remaining = 0;
      return;
    }
    this.step = (target - this.value) / rampSamples;
    this.remaining = rampSamples;
  }

  /** Next n per-sample values; hits the target exactly on the last ramp step. */
  block(n: number): Float64Array {
    const out = new Float64Array(n);
    if (this.remaining <= 0) {
      out.fill(this.value);
      return out;
    }
    for (let i = 0; i < n; i++) {
      const k = i + 1;
      out[i] = k < this.remaining ? this.value + this.step * k : this.target;
    }
    if (this.remaining <= n) {
      this.value = this.target;
      this.remaining = 0;
    } else {
      this.value += this.step * n;
      this.remaining -= n;
    }
    return out;
  }
}

export interface MirrorSynthOptions {
  sampleRate?: number;
  vibratoRateHz?: number;
  paramRampS?: number;
}

export class MirrorSynth {
  readonly sampleRate: number;
  readonly vibratoRateHz: number;
  readonly paramRampS: number;
  carrierPhase = 0;
  lfoPhase = 0;
  private vol = new ParamRamp(0);
  private freq = new ParamRamp(0);
  private vib = new ParamRamp(0);

  constructor(opts: MirrorSynthOptions = {}) {
    this.sampleRate = opts.sampleRate ?? 44100;
    this.vibratoRateHz = opts.vibratoRateHz ?? 20;
    this.paramRampS = opts.paramRampS ?? 0.05;
  }

  setParams(params: SoundState): void {
    const rampSamples = Math.round(this.paramRampS * this.sampleRate);
    this.vol.setTarget(params.audible ? params.volume : 0, rampSamples);
    this.freq.setTarget(params.frequency, rampSamples);
    this.vib.setTarget(params.vibrato, rampSamples);
  }

  renderBlock(n: number): Float64Array {
    const vol = this.vol.block(n);
    const freq = this.freq.block(n);
    const vib = this.vib.block(n);
    const out = new Float64Array(n);
    const lfoIncr = (TWO_PI * this.vibratoRateHz) / this.sampleRate;
    let carrier = this.carrierPhase;
    let lfo = this.lfoPhase;
    for (let i = 0; i < n; i++) {
      const mod = vib[i]! * Math.sin(lfo);
      const instFreq = freq[i]! * (1 + mod);
      const instAmp = Math.min(1, Math.max(0, vol[i]! * (1 + mod)));
      out[i] = instAmp * Math.sin(carrier);
      carrier += (TWO_PI * instFreq) / this.sampleRate;
      lfo += lfoIncr;
    }
    this.carrierPhase = carrier % TWO_PI;
    this.lfoPhase = lfo % TWO_PI;
    return out;
  }
}

/** Frames older than this fade the local audio to silence (fail-quiet). */
export const STALE_FRAME_S = 0.5;

interface AudioGraph {
  ctx: AudioContext;
  carrier: OscillatorNode;
  lfo: OscillatorNode;
  amp: GainNode;
  freqDepth: GainNode;
  ampDepth: GainNode;
}

export class StudioAudio {
  private graph: AudioGraph | null = null;
  private lastFrameWall = 0;
  private watchdog: ReturnType<typeof setInterval> | null = null;
  readonly rampS = 0.05;

  /** Must be called from a user gesture so the AudioContext may start. */
  start(): void {
    if (this.graph) return;
    const ctx = new AudioContext();
    const carrier = ctx.createOscillator();
    const lfo = ctx.createOscillator();
    const amp = ctx.createGain();
    const freqDepth = ctx.createGain();
    const ampDepth = ctx.createGain();

    carrier.type = "sine";
    lfo.type = "sine";
    lfo.frequency.value = 20;
    carrier.frequency.value = 220;
    amp.gain.value = 0;
    freqDepth.gain.value = 0; // scaled to f * vibrato on each frame
    ampDepth.gain.value = 0; // scaled to vol * vibrato on each frame

    lfo.connect(freqDepth).connect(carrier.frequency); // f * (1 + v sin)
    lfo.connect(ampDepth).connect(amp.gain); // vol * (1 + v sin)
    carrier.connect(amp).connect(ctx.destination);
    carrier.start();
    lfo.start();
    this.graph = { ctx, carrier, lfo, amp, freqDepth, ampDepth };
    this.watchdog = setInterval(() => this.checkStale(), 100);
  }

  applyFrame(sound: SoundState): void {
    this.lastFrameWall = performance.now();
    if (!this.graph) return;
    const { ctx, carrier, amp, freqDepth, ampDepth } = this.graph;
    const end = ctx.currentTime + this.rampS;
    const vol = sound.audible ? sound.volume : 0;
    carrier.frequency.linearRampToValueAtTime(sound.frequency, end);
    amp.gain.linearRampToValueAtTime(vol, end);
    freqDepth.gain.linearRampToValueAtTime(sound.frequency * sound.vibrato, end);
    ampDepth.gain.linearRampToValueAtTime(vol * sound.vibrato, end);
  }

  private checkStale(): void {
    if (!this.graph) return;
    if (performance.now() - this.lastFrameWall > STALE_FRAME_S * 1000) {
      const { ctx, amp, ampDepth } = this.graph;
      const end = ctx.currentTime + this.rampS;
      amp.gain.linearRampToValueAtTime(0, end);
      ampDepth.gain.linearRampToValueAtTime(0, end);
    }
  }

  stop(): void {
    if (this.watchdog !== null) clearInterval(this.watchdog);
    this.watchdog = null;
    if (this.graph) {
      this.graph.carrier.stop();
      this.graph.lfo.stop();
      void this.graph.ctx.close();
      this.graph = null;
    }
  }
}
