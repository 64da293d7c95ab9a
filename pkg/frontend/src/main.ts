// Studio wiring: scene canvas with a draggable avatar, rolling charts,
// spectrogram strip, tuning sliders, local audio, connection management.

import { paintLineChart, SpectrogramStrip } from "./charts.js";
import { Connection, type SocketLike } from "./connection.js";
import { buildOverride, key, SLIDERS, SliderPanel, type SliderSpec } from "./controls.js";
import type { FrameMessage } from "./protocol.js";
import {
  buildScene,
  hitTestActor,
  paintScene,
  screenToWorld,
  type AvatarPose,
  type Viewport,
} from "./scene.js";
import { applyFrame, createState, ledCss } from "./state.js";
import { StudioAudio } from "./synth.js";

const state = createState();
const avatars: AvatarPose[] = [];
const audio = new StudioAudio();
let nextActorNum = 1;

function wsUrl(): string {
  const base = window.location.origin.replace(/^http/, "ws");
  return `${base}/ws`;
}

const connection = new Connection(
  () => new WebSocket(wsUrl()) as unknown as SocketLike,
  {
    onFrame: (frame) => {
      if (applyFrame(state, frame)) {
        audio.applyFrame(frame.sound);
        drawFrame(frame);
      }
    },
    onStatus: (status) => {
      state.status = status;
      statusEl.textContent = status;
      statusEl.className = `status ${status}`;
    },
    onError: (reason) => {
      toast(reason);
      const reverted = sliders.onRejected();
      if (reverted) {
        const input = sliderInputs.get(reverted.key);
        if (input) input.value = String(reverted.value);
      }
    },
    onAck: () => sliders.onAccepted(),
  },
);

const sliders = new SliderPanel({ sendSteer: (s) => connection.sendSteer(s) });
const sliderInputs = new Map<string, HTMLInputElement>();

// --- DOM ------------------------------------------------------------------

const sceneCanvas = document.getElementById("scene") as HTMLCanvasElement;
const spectroCanvas = document.getElementById("spectrogram") as HTMLCanvasElement;
const chartsDiv = document.getElementById("charts") as HTMLDivElement;
const statusEl = document.getElementById("status") as HTMLSpanElement;
const phaseEl = document.getElementById("phase") as HTMLSpanElement;
const toastEl = document.getElementById("toast") as HTMLDivElement;

const viewport: Viewport = { width: sceneCanvas.width, height: sceneCanvas.height, pxPerMeter: 90 };
const spectro = new SpectrogramStrip();

const chartCanvases = new Map<string, HTMLCanvasElement>();
for (const name of ["p", "frequency", "volume", "vibrato"]) {
  const canvas = document.createElement("canvas");
  canvas.width = 360;
  canvas.height = 80;
  chartsDiv.appendChild(canvas);
  chartCanvases.set(name, canvas);
}

const chartSpecs = () => [
  { buffer: state.p, label: "p", min: 0, max: 1, color: "#3a7bd5", name: "p" },
  { buffer: state.frequency, label: "frequency (Hz)", min: 0, max: 2000, color: "#d0561f", name: "frequency" },
  { buffer: state.volume, label: "volume", min: 0, max: 1, color: "#2e9e5b", name: "volume" },
  { buffer: state.vibrato, label: "vibrato", min: 0, max: 0.5, color: "#8a4fd0", name: "vibrato" },
];

function drawFrame(frame: FrameMessage): void {
  phaseEl.textContent = `${frame.phase}${frame.target ? ` → ${frame.target}` : ""}`;
  phaseEl.style.background = ledCss(frame);
  const sctx = spectroCanvas.getContext("2d")!;
  spectro.push(
    sctx,
    spectroCanvas.width,
    spectroCanvas.height,
    frame.sound.frequency,
    frame.sound.volume,
    frame.sound.audible,
  );
}

function redraw(): void {
  const ctx = sceneCanvas.getContext("2d")!;
  paintScene(ctx, buildScene(state.latest, avatars, state.status === "connected"), viewport);
  for (const spec of chartSpecs()) {
    const canvas = chartCanvases.get(spec.name)!;
    paintLineChart(canvas.getContext("2d")!, spec, canvas.width, canvas.height, 30);
  }
  connection.flushPendingMoves();
  requestAnimationFrame(redraw);
}

function toast(text: string): void {
  toastEl.textContent = text;
  toastEl.classList.add("visible");
  setTimeout(() => toastEl.classList.remove("visible"), 2500);
}

// --- avatar steering --------------------------------------------------------

let dragging: string | null = null;

sceneCanvas.addEventListener("pointerdown", (ev) => {
  const rect = sceneCanvas.getBoundingClientRect();
  const sx = ev.clientX - rect.left;
  const sy = ev.clientY - rect.top;
  const model = buildScene(state.latest, avatars, true);
  dragging = hitTestActor(model, viewport, sx, sy);
  if (dragging) sceneCanvas.setPointerCapture(ev.pointerId);
});

sceneCanvas.addEventListener("pointermove", (ev) => {
  if (!dragging) return;
  const rect = sceneCanvas.getBoundingClientRect();
  const [x, y] = screenToWorld(viewport, ev.clientX - rect.left, ev.clientY - rect.top);
  const avatar = avatars.find((a) => a.id === dragging);
  if (!avatar) return;
  avatar.x = x;
  avatar.y = y;
  avatar.facingDeg = (Math.atan2(-y, -x) * 180) / Math.PI; // face the robot
  connection.sendSteer({
    action: "move_actor",
    actor: avatar.id,
    x: avatar.x,
    y: avatar.y,
    facing_deg: avatar.facingDeg,
  });
});

sceneCanvas.addEventListener("pointerup", () => (dragging = null));

(document.getElementById("add-visitor") as HTMLButtonElement).addEventListener("click", () => {
  audio.start(); // user gesture: safe point to unlock audio
  const id = `visitor${nextActorNum++}`;
  const pose: AvatarPose = { id, x: 3.0, y: 0.0, facingDeg: 180 };
  avatars.push(pose);
  connection.sendSteer({
    action: "spawn_actor",
    actor: id,
    x: pose.x,
    y: pose.y,
    facing_deg: pose.facingDeg,
  });
});

(document.getElementById("treat") as HTMLButtonElement).addEventListener("click", () => {
  connection.sendSteer({ action: "treat_taken" });
});

(document.getElementById("sound") as HTMLButtonElement).addEventListener("click", () => {
  audio.start();
  toast("audio enabled");
});

// --- sliders ----------------------------------------------------------------

const slidersDiv = document.getElementById("sliders") as HTMLDivElement;
for (const spec of SLIDERS) {
  const row = document.createElement("label");
  row.className = "slider-row";
  const title = document.createElement("span");
  title.textContent = spec.label;
  const input = document.createElement("input");
  input.type = "range";
  input.min = String(spec.min);
  input.max = String(spec.max);
  input.step = String(spec.step);
  input.value = String(spec.initial);
  const value = document.createElement("code");
  value.textContent = String(spec.initial);
  input.addEventListener("input", () => (value.textContent = input.value));
  input.addEventListener("change", () => {
    sliders.commit(spec, Number(input.value));
    // reflect any coupled threshold the payload moved
    const coupled = buildOverride(spec, Number(input.value), sliders.thresholds());
    if (coupled.action === "set_config_overrides") {
      for (const [field, v] of Object.entries({ ...coupled.fsm, ...coupled.map })) {
        const other = sliderInputs.get(`${spec.section}.${field}`);
        if (other && other !== input) other.value = String(v);
      }
    }
  });
  sliderInputs.set(key(spec), input);
  row.append(title, input, value);
  slidersDiv.appendChild(row);
}

connection.open();
requestAnimationFrame(redraw);
