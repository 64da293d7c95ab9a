// Rolling line charts and a parameter-derived spectrogram strip.
//
// The spectrogram view paints one column per frame at the mapped frequency
// with brightness following volume: a display of the sound parameters the
// server sent, not an FFT of locally rendered audio.

import type { RollingBuffer } from "./state.js";

export interface ChartSpec {
  buffer: RollingBuffer;
  label: string;
  min: number;
  max: number;
  color: string;
}

export function paintLineChart(
  ctx: CanvasRenderingContext2D,
  spec: ChartSpec,
  width: number,
  height: number,
  windowS: number,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.strokeStyle = "#ccc";
  ctx.strokeRect(0.5, 0.5, width - 1, height - 1);
  ctx.fillStyle = "#666";
  ctx.font = "10px sans-serif";
  ctx.fillText(spec.label, 6, 12);

  const points = spec.buffer.points;
  const last = points[points.length - 1];
  if (!last) return;
  const t1 = last.t;
  const t0 = t1 - windowS;
  ctx.strokeStyle = spec.color;
  ctx.beginPath();
  let started = false;
  for (const pt of points) {
    if (pt.t < t0) continue;
    const x = ((pt.t - t0) / windowS) * width;
    const yFrac = (pt.v - spec.min) / (spec.max - spec.min);
    const y = height - Math.min(1, Math.max(0, yFrac)) * height;
    if (started) ctx.lineTo(x, y);
    else {
      ctx.moveTo(x, y);
      started = true;
    }
  }
  ctx.stroke();
}

export class SpectrogramStrip {
  private column = 0;

  constructor(
    private fMin = 100,
    private fMax = 2000,
  ) {}

  /** Paint one column for this frame's (frequency, volume, audible). */
  push(
    ctx: CanvasRenderingContext2D,
    width: number,
    height: number,
    frequency: number,
    volume: number,
    audible: boolean,
  ): void {
    const x = this.column % width;
    ctx.fillStyle = "#111";
    ctx.fillRect(x, 0, 1, height);
    if (audible && volume > 0) {
      const logFrac =
        (Math.log(frequency) - Math.log(this.fMin)) / (Math.log(this.fMax) - Math.log(this.fMin));
      const y = height - Math.min(1, Math.max(0, logFrac)) * height;
      const level = Math.round(80 + 175 * Math.min(1, volume));
      ctx.fillStyle = `rgb(${level}, ${Math.round(level * 0.8)}, 60)`;
      ctx.fillRect(x, y - 2, 1, 4);
    }
    // moving cursor
    ctx.fillStyle = "#3c6";
    ctx.fillRect((x + 1) % width, 0, 1, height);
    this.column += 1;
  }
}
