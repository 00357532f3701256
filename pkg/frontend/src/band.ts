// Decision-band rendering geometry. The zone boundaries replicate the
// service semantics exactly (accept strictly below, reject inclusive at
// the upper threshold); the zone is used for display only, never to make
// a decision.

import type { Thresholds } from './types.js';

export type Zone = 'accept' | 'hesitate' | 'reject';

export function zoneOf(score: number, thresholds: Thresholds): Zone {
  if (score < thresholds.accept_below) return 'accept';
  if (score >= thresholds.reject_at_or_above) return 'reject';
  return 'hesitate';
}

export interface BandGeometry {
  /** fractions of the band width, in drawing order accept/hesitate/reject */
  acceptWidth: number;
  hesitateWidth: number;
  rejectWidth: number;
  /** marker position as a fraction of band width, clamped to [0, 1] */
  markerX: number;
  /** score value at the right edge of the band */
  scaleMax: number;
}

export function bandGeometry(score: number, thresholds: Thresholds): BandGeometry {
  const scaleMax = Math.max(thresholds.reject_at_or_above * 1.5, score * 1.1, 1e-9);
  return {
    acceptWidth: thresholds.accept_below / scaleMax,
    hesitateWidth: (thresholds.reject_at_or_above - thresholds.accept_below) / scaleMax,
    rejectWidth: 1 - thresholds.reject_at_or_above / scaleMax,
    markerX: Math.min(1, Math.max(0, score / scaleMax)),
    scaleMax,
  };
}
