/** Wire schema v1 shared with the gateway (see docs/wire-schema.md).
 *
 * Encoding is canonical — keys sorted recursively, no whitespace — so
 * encode/decode identity is byte-comparable.
 */

export const WIRE_VERSION = 1;

export interface SceneRobot {
  id: number;
  pos: [number, number];
}

export interface SceneFire {
  id: number;
  pos: [number, number];
  radius: number;
  growth: number;
}

export interface DiskObstacle {
  kind: "disk";
  pos: [number, number];
  size: number;
  reactive: number;
  repulse: number;
}

export interface BarObstacle {
  kind: "bar";
  pos: [number, number];
  extent: [number, number];
  heading: number;
  reactive: number;
  repulse: number;
}

export type Obstacle = DiskObstacle | BarObstacle;

export interface SceneMessage {
  v: number;
  type: "scene";
  dt: number;
  robots: SceneRobot[];
  fires: SceneFire[];
  obstacles: Obstacle[];
  edges: [number, number][];
  weights: Record<string, number>;
  safety: { Rr: number; Ro: number };
}

export interface FrameRobot {
  id: number;
  pos: [number, number];
  vel: [number, number];
  target: number;
  psi: number;
  lam: number;
}

export interface FrameFire {
  id: number;
  radius: number;
  extinguished: boolean;
}

export interface FrameMessage {
  v: number;
  type: "frame";
  tick: number;
  clock: number;
  paused: boolean;
  path: [number, number][] | null;
  path_id: number;
  robots: FrameRobot[];
  fires: FrameFire[];
  consensus_error: number;
}

export interface AckMessage {
  v: number;
  type: "ack";
  seq: number;
  tick: number;
}

export interface RejectMessage {
  v: number;
  type: "reject";
  seq: number | null;
  reason: string;
}

export interface SetPathCommand {
  v: number;
  type: "cmd.set_path";
  seq: number;
  points: [number, number][];
}

export interface ClearPathCommand {
  v: number;
  type: "cmd.clear_path";
  seq: number;
}

export interface SelectRobotCommand {
  v: number;
  type: "cmd.select_robot";
  seq: number;
  id: number;
}

export interface PauseCommand {
  v: number;
  type: "cmd.pause";
  seq: number;
}

export interface ResumeCommand {
  v: number;
  type: "cmd.resume";
  seq: number;
}

export interface SetWeightCommand {
  v: number;
  type: "cmd.set_weight";
  seq: number;
  name: string;
  value: number;
}

export type CommandMessage =
  | SetPathCommand
  | ClearPathCommand
  | SelectRobotCommand
  | PauseCommand
  | ResumeCommand
  | SetWeightCommand;

export type WireMessage =
  | SceneMessage
  | FrameMessage
  | AckMessage
  | RejectMessage
  | CommandMessage;

export class WireFormatError extends Error {}

function canonical(value: unknown): string {
  if (value === null || typeof value === "number" || typeof value === "boolean") {
    return JSON.stringify(value);
  }
  if (typeof value === "string") {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return "[" + value.map(canonical).join(",") + "]";
  }
  if (typeof value === "object") {
    const obj = value as Record<string, unknown>;
    const keys = Object.keys(obj).sort();
    return "{" + keys.map((k) => JSON.stringify(k) + ":" + canonical(obj[k])).join(",") + "}";
  }
  throw new WireFormatError(`unencodable value: ${String(value)}`);
}

export function encode(msg: WireMessage): string {
  return canonical(msg);
}

export function decode(text: string): WireMessage {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (exc) {
    throw new WireFormatError(`not valid JSON: ${String(exc)}`);
  }
  if (raw === null || typeof raw !== "object" || Array.isArray(raw)) {
    throw new WireFormatError("message must be a JSON object");
  }
  const msg = raw as { v?: unknown; type?: unknown };
  if (msg.v !== WIRE_VERSION) {
    throw new WireFormatError(
      `schema version mismatch: got ${JSON.stringify(msg.v)}, want ${WIRE_VERSION}`,
    );
  }
  if (typeof msg.type !== "string") {
    throw new WireFormatError("missing type tag");
  }
  return raw as WireMessage;
}

export function setPath(seq: number, points: [number, number][]): SetPathCommand {
  return { v: WIRE_VERSION, type: "cmd.set_path", seq, points };
}

export function clearPath(seq: number): ClearPathCommand {
  return { v: WIRE_VERSION, type: "cmd.clear_path", seq };
}

export function selectRobot(seq: number, id: number): SelectRobotCommand {
  return { v: WIRE_VERSION, type: "cmd.select_robot", seq, id };
}

export function pause(seq: number): PauseCommand {
  return { v: WIRE_VERSION, type: "cmd.pause", seq };
}

export function resume(seq: number): ResumeCommand {
  return { v: WIRE_VERSION, type: "cmd.resume", seq };
}

export function setWeight(seq: number, name: string, value: number): SetWeightCommand {
  return { v: WIRE_VERSION, type: "cmd.set_weight", seq, name, value };
}
