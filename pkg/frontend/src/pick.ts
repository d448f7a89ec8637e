/** Robot selection: nearest robot within the pick radius, ties by lowest id. */

import { FrameRobot } from "./wire.js";

export const PICK_RADIUS = 15; // world units

export function pickRobot(
  wx: number,
  wy: number,
  robots: FrameRobot[],
  radius = PICK_RADIUS,
): number | null {
  let bestId: number | null = null;
  let bestDist = Infinity;
  for (const r of robots) {
    const d = Math.hypot(r.pos[0] - wx, r.pos[1] - wy);
    if (d > radius) continue;
    if (d < bestDist || (d === bestDist && bestId !== null && r.id < bestId)) {
      bestDist = d;
      bestId = r.id;
    }
  }
  return bestId;
}
