/** Camera transform between world and screen coordinates.
 *
 * Screen y grows downward, world y upward; zoom is pixels per world unit.
 * worldToScreen and screenToWorld are exact inverses in real arithmetic,
 * so the round-trip error is bounded by floating-point rounding (far
 * below the half-pixel budget).
 */

export interface Camera {
  /** World point shown at the canvas origin offset. */
  centerX: number;
  centerY: number;
  /** Pixels per world unit; strictly positive. */
  zoom: number;
  /** Canvas size in pixels. */
  width: number;
  height: number;
}

export function defaultCamera(width: number, height: number): Camera {
  return { centerX: 250, centerY: 300, zoom: 1, width, height };
}

export function worldToScreen(cam: Camera, wx: number, wy: number): [number, number] {
  return [
    cam.width / 2 + (wx - cam.centerX) * cam.zoom,
    cam.height / 2 - (wy - cam.centerY) * cam.zoom,
  ];
}

export function screenToWorld(cam: Camera, sx: number, sy: number): [number, number] {
  return [
    cam.centerX + (sx - cam.width / 2) / cam.zoom,
    cam.centerY - (sy - cam.height / 2) / cam.zoom,
  ];
}

/** Pan by a screen-space delta (drag gesture). */
export function pan(cam: Camera, dxPx: number, dyPx: number): Camera {
  return {
    ...cam,
    centerX: cam.centerX - dxPx / cam.zoom,
    centerY: cam.centerY + dyPx / cam.zoom,
  };
}

/** Zoom by a factor while keeping the world point under (sx, sy) fixed. */
export function zoomAt(cam: Camera, sx: number, sy: number, factor: number): Camera {
  const [wx, wy] = screenToWorld(cam, sx, sy);
  const zoom = Math.min(100, Math.max(0.01, cam.zoom * factor));
  const next = { ...cam, zoom };
  // Re-center so (wx, wy) maps back to (sx, sy).
  return {
    ...next,
    centerX: wx - (sx - cam.width / 2) / zoom,
    centerY: wy + (sy - cam.height / 2) / zoom,
  };
}
