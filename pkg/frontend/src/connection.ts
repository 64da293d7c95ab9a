// Websocket client: handshake, frame dispatch, steering with drag
// coalescing, reconnect with capped backoff. The socket is injected so
// tests can drive the protocol without a network.

import {
  SCHEMA_VERSION,
  parseServerMessage,
  type FrameMessage,
  type SteerAction,
} from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
  onclose: (() => void) | null;
}

export interface ConnectionHandlers {
  onFrame?: (frame: FrameMessage) => void;
  onStatus?: (status: "connecting" | "connected" | "disconnected") => void;
  onError?: (reason: string) => void;
  onAck?: (action: string, frame: number) => void;
}

/** Minimum interval between forwarded move_actor messages per actor. */
export const MOVE_INTERVAL_MS = 1000 / 30;

export class Connection {
  private socket: SocketLike | null = null;
  private closed = false;
  private retryMs = 500;
  private lastMoveSent = new Map<string, number>();
  private pendingMoves = new Map<string, SteerAction>();

  constructor(
    private factory: () => SocketLike,
    private handlers: ConnectionHandlers = {},
    private now: () => number = () => performance.now(),
  ) {}

  open(): void {
    this.closed = false;
    this.connect();
  }

  private connect(): void {
    this.handlers.onStatus?.("connecting");
    const socket = this.factory();
    this.socket = socket;
    socket.onopen = () => {
      this.retryMs = 500;
      this.handlers.onStatus?.("connected");
      socket.send(JSON.stringify({ type: "hello", schema: SCHEMA_VERSION }));
    };
    socket.onmessage = (ev) => this.dispatch(ev.data);
    socket.onclose = () => {
      this.handlers.onStatus?.("disconnected");
      if (!this.closed) {
        setTimeout(() => this.connect(), this.retryMs);
        this.retryMs = Math.min(this.retryMs * 2, 8000);
      }
    };
  }

  private dispatch(raw: string): void {
    const msg = parseServerMessage(raw);
    if (msg === null) return;
    switch (msg.type) {
      case "frame":
        this.handlers.onFrame?.(msg);
        break;
      case "error":
        this.handlers.onError?.(msg.reason);
        break;
      case "ack":
        this.handlers.onAck?.(msg.action, msg.frame);
        break;
      default:
        break; // hello / hello_ack carry nothing actionable here
    }
  }

  /** Send a steer; move_actor is coalesced to at most one per frame period. */
  sendSteer(steer: SteerAction): void {
    if (steer.action === "move_actor") {
      const last = this.lastMoveSent.get(steer.actor) ?? -Infinity;
      if (this.now() - last < MOVE_INTERVAL_MS) {
        this.pendingMoves.set(steer.actor, steer); // newest drag position wins
        return;
      }
      this.lastMoveSent.set(steer.actor, this.now());
      this.sendRaw(steer);
      return;
    }
    if ("actor" in steer && steer.actor !== undefined) {
      // Flush a queued move first so e.g. treat_taken sees the final pose.
      const pending = this.pendingMoves.get(steer.actor);
      if (pending) {
        this.pendingMoves.delete(steer.actor);
        this.lastMoveSent.set(steer.actor, this.now());
        this.sendRaw(pending);
      }
    }
    this.sendRaw(steer);
  }

  /** Called periodically (e.g. per animation frame) to drain held moves. */
  flushPendingMoves(): void {
    for (const [actor, steer] of [...this.pendingMoves]) {
      const last = this.lastMoveSent.get(actor) ?? -Infinity;
      if (this.now() - last >= MOVE_INTERVAL_MS) {
        this.pendingMoves.delete(actor);
        this.lastMoveSent.set(actor, this.now());
        this.sendRaw(steer);
      }
    }
  }

  private sendRaw(steer: SteerAction): void {
    this.socket?.send(JSON.stringify({ type: "steer", ...steer }));
  }

  close(): void {
    this.closed = true;
    this.socket?.close();
  }
}
