// Canvas overlay geometry: candidate curve, template variants, and the
// envelope drawn in one normalized [0,1]x[0,1] coordinate space. Curve y
// grows downward (raster row order), matching canvas pixels directly.

import type { ReviewItem, Template } from './types.js';

export interface Viewport {
  width: number;
  height: number;
  pad: number;
}

export function toPixel(
  point: readonly [number, number],
  view: Viewport,
): [number, number] {
  const [x, y] = point;
  return [
    view.pad + x * (view.width - 2 * view.pad),
    view.pad + y * (view.height - 2 * view.pad),
  ];
}

export function polylinePixels(
  points: readonly [number, number][],
  view: Viewport,
): [number, number][] {
  return points.map((p) => toPixel(p, view));
}

/** Closed polygon: along the upper bound, back along the lower bound. */
export function envelopePolygon(
  gridX: readonly number[],
  lower: readonly number[],
  upper: readonly number[],
  view: Viewport,
): [number, number][] {
  const top = gridX.map((x, i) => toPixel([x, upper[i] ?? 0], view));
  const bottom = [...gridX.map((x, i) => toPixel([x, lower[i] ?? 0], view))].reverse();
  return [...top, ...bottom];
}

function strokePath(ctx: CanvasRenderingContext2D, pixels: [number, number][]): void {
  if (pixels.length === 0) return;
  ctx.beginPath();
  const [x0, y0] = pixels[0]!;
  ctx.moveTo(x0, y0);
  for (const [x, y] of pixels.slice(1)) ctx.lineTo(x, y);
  ctx.stroke();
}

export function drawOverlay(
  ctx: CanvasRenderingContext2D,
  review: ReviewItem,
  template: Template,
  view: Viewport,
): void {
  ctx.clearRect(0, 0, view.width, view.height);

  const polygon = envelopePolygon(
    template.envelope.grid_x,
    template.envelope.lower,
    template.envelope.upper,
    view,
  );
  if (polygon.length) {
    ctx.beginPath();
    const [x0, y0] = polygon[0]!;
    ctx.moveTo(x0, y0);
    for (const [x, y] of polygon.slice(1)) ctx.lineTo(x, y);
    ctx.closePath();
    ctx.fillStyle = 'rgba(100, 149, 237, 0.18)';
    ctx.fill();
  }

  ctx.lineWidth = 1;
  ctx.strokeStyle = 'rgba(70, 110, 180, 0.55)';
  for (const variant of template.variants) {
    strokePath(ctx, polylinePixels(variant.points, view));
  }

  ctx.lineWidth = 2;
  ctx.strokeStyle = '#d9480f';
  strokePath(ctx, polylinePixels(review.candidate_curve, view));
}
