// Wire types mirroring the service JSON payloads.

export interface Thresholds {
  accept_below: number;
  reject_at_or_above: number;
}

export type ReviewStatus = 'pending' | 'approved' | 'denied';

export interface ReviewItem {
  request_id: string;
  client_id: string;
  score: number;
  candidate_curve: [number, number][];
  template_version: number;
  submitted_at: string;
  status: ReviewStatus;
  decided_by: string | null;
}

export interface ReviewListing {
  reviews: ReviewItem[];
  thresholds: Thresholds;
}

export interface TemplateVariant {
  seed_offset: number;
  fitness: number;
  points: [number, number][];
}

export interface Template {
  client_id: string;
  version: number;
  m: number;
  created_from: number;
  variants: TemplateVariant[];
  envelope: { grid_x: number[]; lower: number[]; upper: number[] };
}

export type Decision = 'approve' | 'deny';
