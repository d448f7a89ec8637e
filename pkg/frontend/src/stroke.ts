/** Freehand stroke handling: decimation in world units and conversion to
 * a set_path command. The server-side path builder is authoritative; the
 * client only thins the stroke to the spline resampling granularity.
 */

import { SetPathCommand, setPath } from "./wire.js";

export const MIN_SPACING = 5; // world units, matches server resampling

export function decimate(points: [number, number][], minSpacing = MIN_SPACING): [number, number][] {
  const out: [number, number][] = [];
  for (const p of points) {
    const last = out[out.length - 1];
    if (last === undefined || Math.hypot(p[0] - last[0], p[1] - last[1]) >= minSpacing) {
      out.push(p);
    }
  }
  // Always keep the stroke's endpoint so short final segments survive.
  const tail = points[points.length - 1];
  const last = out[out.length - 1];
  if (tail !== undefined && last !== undefined && (tail[0] !== last[0] || tail[1] !== last[1])) {
    out.push(tail);
  }
  return out;
}

/** Convert a finished stroke to a command, or null when degenerate
 * (fewer than 2 distinct points). */
export function strokeToPath(
  seq: number,
  points: [number, number][],
  minSpacing = MIN_SPACING,
): SetPathCommand | null {
  const thinned = decimate(points, minSpacing);
  const distinct = new Set(thinned.map((p) => `${p[0]},${p[1]}`));
  if (distinct.size < 2) {
    return null;
  }
  return setPath(seq, thinned);
}
