export interface Suggestion {
  action_list: string[];
  optimal: boolean;
  reason: string;
  suggestion: string;
}

export interface NextResponse {
  exhausted: boolean;
  suggestion?: Suggestion;
}

export interface SessionRecord {
  session_id: string;
  state: 'created' | 'extracting' | 'tracing' | 'advising' | 'ready' | 'error';
  error_detail?: string | null;
}

export interface TraceAction {
  text: string;
  segment: number;
  batch: number;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;
