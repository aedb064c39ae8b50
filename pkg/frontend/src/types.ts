// Payload shapes as the annotation service sends them. Field names are
// the server's; do not rename when adding views on top.

export interface Schema {
  verdicts: string[];
  matched_via: string[];
  segment_ops: string[];
  languages: string[];
  guidelines: {
    max_tokens: number;
    max_ratio: number;
  };
}

export interface ArticleView {
  id: string;
  title: string;
  lead: string | null;
  date: string;
  language: string;
  link: string;
  body: string[];
}

export interface CandidateView {
  rank: number;
  target_id: string;
  score: number;
  matched_via: string;
  article: ArticleView;
}

export interface Task {
  source_id: string;
  source_language: string;
  target_language: string;
  source: ArticleView;
  candidates: CandidateView[];
  remaining: number;
}

export interface TaskStats {
  pending: number;
  completed: number;
  verdicts: number;
}

export interface SegmentView {
  index: number;
  text: string;
  line: number;
  article: string;
  merged_from: number;
  edited: boolean;
}

export interface LinkView {
  src: number[];
  tgt: number[];
  violations: string[];
}

export interface SessionView {
  id: string;
  version: number;
  src_language: string;
  tgt_language: string;
  src_segments: SegmentView[];
  tgt_segments: SegmentView[];
  links: LinkView[];
}

export interface Link {
  src: number[];
  tgt: number[];
}

export type SegmentSide = 'src' | 'tgt';

export interface SegmentOp {
  op: 'merge' | 'split' | 'edit';
  side: SegmentSide;
  first?: number;
  count?: number;
  index?: number;
  at?: number;
  text?: string;
}
