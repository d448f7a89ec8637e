/** Console entry point: wires canvas input to the gateway client.
 *
 * Pointer gestures map onto the three operator intents:
 *   - left-drag draws a path (sent as cmd.set_path on release)
 *   - left-click on a robot selects it (cmd.select_robot)
 *   - Space toggles pause/resume; Escape clears the path
 *   - right-drag pans, wheel zooms about the cursor
 */

import { GatewayClient } from "./client.js";
import { pickRobot } from "./pick.js";
import { ViewState, render } from "./render.js";
import { strokeToPath } from "./stroke.js";
import { defaultCamera, pan, screenToWorld, zoomAt } from "./view.js";
import { clearPath, pause, resume, selectRobot } from "./wire.js";

const canvas = document.getElementById("scene") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const toast = document.getElementById("toast")!;

const view: ViewState = {
  camera: defaultCamera(canvas.width, canvas.height),
  scene: null,
  frame: null,
  stroke: [],
  selected: null,
  connected: false,
};

function showToast(text: string): void {
  toast.textContent = text;
  toast.classList.add("visible");
  setTimeout(() => toast.classList.remove("visible"), 2500);
}

const wsUrl = `${location.protocol === "https:" ? "wss" : "ws"}://${location.host}/ws`;
const client = new GatewayClient(wsUrl, {
  onScene: (scene) => {
    view.scene = scene;
  },
  onFrame: (frame) => {
    view.frame = frame; // latest frame only; render loop picks it up
  },
  onReject: (reject) => showToast(`rejected: ${reject.reason}`),
  onStatus: (connected) => {
    view.connected = connected;
  },
});
client.connect();

let drawing = false;
let panning = false;
let lastPan: [number, number] = [0, 0];

canvas.addEventListener("pointerdown", (ev) => {
  if (ev.button === 2) {
    panning = true;
    lastPan = [ev.offsetX, ev.offsetY];
    return;
  }
  drawing = true;
  view.stroke = [screenToWorld(view.camera, ev.offsetX, ev.offsetY)];
});

canvas.addEventListener("pointermove", (ev) => {
  if (panning) {
    view.camera = pan(view.camera, ev.offsetX - lastPan[0], ev.offsetY - lastPan[1]);
    lastPan = [ev.offsetX, ev.offsetY];
    return;
  }
  if (drawing) {
    view.stroke.push(screenToWorld(view.camera, ev.offsetX, ev.offsetY));
  }
});

canvas.addEventListener("pointerup", (ev) => {
  if (panning) {
    panning = false;
    return;
  }
  if (!drawing) return;
  drawing = false;
  const stroke = view.stroke;
  view.stroke = [];
  if (stroke.length <= 2) {
    // Treat a click (no real drag) as robot selection.
    const [wx, wy] = screenToWorld(view.camera, ev.offsetX, ev.offsetY);
    const id = view.frame ? pickRobot(wx, wy, view.frame.robots) : null;
    if (id !== null) {
      view.selected = id;
      client.send(selectRobot(client.nextSeq(), id));
    }
    return;
  }
  const cmd = strokeToPath(client.nextSeq(), stroke);
  if (cmd === null) {
    showToast("stroke too short for a path");
    return;
  }
  client.send(cmd);
});

canvas.addEventListener("contextmenu", (ev) => ev.preventDefault());
canvas.addEventListener("wheel", (ev) => {
  ev.preventDefault();
  view.camera = zoomAt(view.camera, ev.offsetX, ev.offsetY, ev.deltaY < 0 ? 1.1 : 1 / 1.1);
});

window.addEventListener("keydown", (ev) => {
  if (ev.code === "Space") {
    ev.preventDefault();
    const paused = view.frame?.paused ?? false;
    client.send(paused ? resume(client.nextSeq()) : pause(client.nextSeq()));
  } else if (ev.code === "Escape") {
    client.send(clearPath(client.nextSeq()));
  }
});

function loop(): void {
  render(ctx, view);
  requestAnimationFrame(loop);
}
requestAnimationFrame(loop);
