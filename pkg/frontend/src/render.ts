/** Canvas rendering of the latest frame: obstacles with reactive/repulsive
 * rings (dashed), fires as disks scaled by radius, robots with heading
 * arrows and a highlight on the human-influenced one, the active path,
 * and the in-progress stroke.
 */

import { Camera, worldToScreen } from "./view.js";
import { FrameMessage, SceneMessage } from "./wire.js";

export interface ViewState {
  camera: Camera;
  scene: SceneMessage | null;
  frame: FrameMessage | null;
  stroke: [number, number][]; // world coordinates
  selected: number | null;
  connected: boolean;
}

const COLORS = {
  background: "#11151a",
  obstacle: "#6b7280",
  reactive: "#8899aa",
  repulse: "#cc6655",
  fire: "rgba(230, 120, 40, 0.75)",
  fireDead: "rgba(120, 120, 120, 0.4)",
  robot: "#4db6e2",
  psi: "#ffd54d",
  path: "#66d17a",
  stroke: "#e0e0e0",
  edge: "rgba(255,255,255,0.12)",
  text: "#d5dbe1",
};

function polyline(ctx: CanvasRenderingContext2D, cam: Camera, pts: [number, number][], close = false) {
  ctx.beginPath();
  pts.forEach(([x, y], i) => {
    const [sx, sy] = worldToScreen(cam, x, y);
    if (i === 0) ctx.moveTo(sx, sy);
    else ctx.lineTo(sx, sy);
  });
  if (close) ctx.closePath();
}

function circle(ctx: CanvasRenderingContext2D, cam: Camera, x: number, y: number, r: number) {
  const [sx, sy] = worldToScreen(cam, x, y);
  ctx.beginPath();
  ctx.arc(sx, sy, r * cam.zoom, 0, 2 * Math.PI);
}

function capsule(
  ctx: CanvasRenderingContext2D,
  cam: Camera,
  cx: number,
  cy: number,
  halfLength: number,
  halfWidth: number,
  heading: number,
) {
  const ax = Math.cos(heading) * halfLength;
  const ay = Math.sin(heading) * halfLength;
  const [sx0, sy0] = worldToScreen(cam, cx - ax, cy - ay);
  const [sx1, sy1] = worldToScreen(cam, cx + ax, cy + ay);
  const r = halfWidth * cam.zoom;
  const ang = Math.atan2(sy1 - sy0, sx1 - sx0);
  ctx.beginPath();
  ctx.arc(sx0, sy0, r, ang + Math.PI / 2, ang - Math.PI / 2);
  ctx.arc(sx1, sy1, r, ang - Math.PI / 2, ang + Math.PI / 2);
  ctx.closePath();
}

export function render(ctx: CanvasRenderingContext2D, view: ViewState): void {
  const cam = view.camera;
  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, cam.width, cam.height);
  const { scene, frame } = view;
  if (scene === null) {
    banner(ctx, cam, "connecting…");
    return;
  }

  for (const ob of scene.obstacles) {
    for (const [level, color] of [
      [ob.reactive, COLORS.reactive],
      [ob.repulse, COLORS.repulse],
    ] as const) {
      ctx.setLineDash([6, 6]);
      ctx.strokeStyle = color;
      ctx.lineWidth = 1;
      if (ob.kind === "disk") circle(ctx, cam, ob.pos[0], ob.pos[1], level);
      else capsule(ctx, cam, ob.pos[0], ob.pos[1], ob.extent[0], level, ob.heading);
      ctx.stroke();
    }
    ctx.setLineDash([]);
    ctx.fillStyle = COLORS.obstacle;
    if (ob.kind === "disk") {
      circle(ctx, cam, ob.pos[0], ob.pos[1], ob.size);
    } else {
      capsule(ctx, cam, ob.pos[0], ob.pos[1], ob.extent[0], ob.extent[1], ob.heading);
    }
    ctx.fill();
  }

  const robots = frame ? frame.robots : scene.robots.map((r) => ({ ...r, vel: [0, 0] as [number, number], target: -1, psi: 0, lam: 0 }));

  ctx.strokeStyle = COLORS.edge;
  ctx.lineWidth = 1;
  for (const [i, j] of scene.edges) {
    const a = robots.find((r) => r.id === i);
    const b = robots.find((r) => r.id === j);
    if (a && b) {
      polyline(ctx, cam, [a.pos, b.pos]);
      ctx.stroke();
    }
  }

  for (const [j, f] of scene.fires.entries()) {
    const radius = frame ? frame.fires[j]?.radius ?? f.radius : f.radius;
    const dead = frame ? frame.fires[j]?.extinguished ?? false : false;
    ctx.fillStyle = dead ? COLORS.fireDead : COLORS.fire;
    circle(ctx, cam, f.pos[0], f.pos[1], radius);
    ctx.fill();
  }

  if (frame?.path) {
    ctx.strokeStyle = COLORS.path;
    ctx.lineWidth = 2;
    polyline(ctx, cam, frame.path);
    ctx.stroke();
  }

  if (view.stroke.length > 1) {
    ctx.strokeStyle = COLORS.stroke;
    ctx.setLineDash([3, 3]);
    ctx.lineWidth = 1;
    polyline(ctx, cam, view.stroke);
    ctx.stroke();
    ctx.setLineDash([]);
  }

  for (const r of robots) {
    const [sx, sy] = worldToScreen(cam, r.pos[0], r.pos[1]);
    if (r.psi === 1) {
      ctx.strokeStyle = COLORS.psi;
      ctx.lineWidth = 3;
      ctx.beginPath();
      ctx.arc(sx, sy, 10, 0, 2 * Math.PI);
      ctx.stroke();
    }
    ctx.fillStyle = COLORS.robot;
    ctx.beginPath();
    ctx.arc(sx, sy, 5, 0, 2 * Math.PI);
    ctx.fill();
    const speed = Math.hypot(r.vel[0], r.vel[1]);
    if (speed > 1e-6) {
      const hx = sx + (r.vel[0] / speed) * 14;
      const hy = sy - (r.vel[1] / speed) * 14;
      ctx.strokeStyle = COLORS.robot;
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.moveTo(sx, sy);
      ctx.lineTo(hx, hy);
      ctx.stroke();
    }
    ctx.fillStyle = COLORS.text;
    ctx.font = "11px sans-serif";
    ctx.fillText(String(r.id), sx + 8, sy - 8);
  }

  const status: string[] = [];
  if (!view.connected) status.push("DISCONNECTED");
  if (frame?.paused) status.push("PAUSED");
  if (frame) status.push(`t=${frame.clock.toFixed(1)}s`);
  banner(ctx, cam, status.join("  "));
}

function banner(ctx: CanvasRenderingContext2D, cam: Camera, text: string): void {
  ctx.fillStyle = COLORS.text;
  ctx.font = "13px monospace";
  ctx.fillText(text, 12, cam.height - 12);
}
