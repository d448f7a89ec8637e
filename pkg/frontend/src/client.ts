/** WebSocket client: keeps the latest frame, serializes outbound commands
 * with strictly increasing sequence numbers, surfaces acks/rejects.
 */

import {
  CommandMessage,
  FrameMessage,
  RejectMessage,
  SceneMessage,
  WireFormatError,
  decode,
  encode,
} from "./wire.js";

export interface ClientEvents {
  onScene(scene: SceneMessage): void;
  onFrame(frame: FrameMessage): void;
  onReject(reject: RejectMessage): void;
  onStatus(connected: boolean): void;
}

export class GatewayClient {
  private ws: WebSocket | null = null;
  private seq = 0;

  constructor(
    private readonly url: string,
    private readonly events: ClientEvents,
  ) {}

  connect(): void {
    const ws = new WebSocket(this.url);
    this.ws = ws;
    ws.onopen = () => this.events.onStatus(true);
    ws.onclose = () => this.events.onStatus(false);
    ws.onerror = () => this.events.onStatus(false);
    ws.onmessage = (ev: MessageEvent<string>) => {
      let msg;
      try {
        msg = decode(ev.data);
      } catch (exc) {
        if (exc instanceof WireFormatError) return; // drop unknown payloads
        throw exc;
      }
      switch (msg.type) {
        case "scene":
          this.events.onScene(msg);
          break;
        case "frame":
          this.events.onFrame(msg);
          break;
        case "reject":
          this.events.onReject(msg);
          break;
        default:
          break; // acks need no UI action
      }
    };
  }

  /** Allocate the next sequence number; build* helpers in wire.ts take it. */
  nextSeq(): number {
    this.seq += 1;
    return this.seq;
  }

  send(cmd: CommandMessage): void {
    if (this.ws === null || this.ws.readyState !== WebSocket.OPEN) return;
    this.ws.send(encode(cmd));
  }
}
