/** Shared shapes mirroring the service's document and payload formats. */

export interface NodeRecord {
  category: string;
  key: string;
  loc?: string;
  name?: string;
  text?: string;
  Rel?: number | string;
  lambdaHw?: number | string;
  lambdaSw?: number | string;
  id?: string;
  k?: number;
  [extra: string]: unknown;
}

export interface LinkRecord {
  from: string;
  to: string;
  fromPort?: string;
  toPort?: string;
  [extra: string]: unknown;
}

export interface GraphDocument {
  class?: string;
  nodeDataArray: NodeRecord[];
  linkDataArray: LinkRecord[];
  [extra: string]: unknown;
}

export interface Violation {
  rule: string;
  key: string;
  message: string;
}

export interface ValidationSummary {
  nodes: number;
  links: number;
  valid: boolean;
  violations: Violation[];
}

export interface PipelineInfo {
  index: number;
  sink: string;
  members: string[];
  sequence: string[];
  names: string[];
}

export interface RankRow {
  rank: number;
  pipeline_index: number;
  mask: number | null;
  mask_hex: string | null;
  total_lambda: number;
  static_factor: number;
  r_at_ref: number;
  mttf_hours: number | null;
  sequence: string[];
  members: string[];
  sink: string;
}

export interface RankingPayload {
  t_ref: number;
  ranking: RankRow[];
}

export interface SimState {
  tick: number;
  status: number;
  status_hex: string;
  status_bits: string;
  active_index: number | null;
  active_mask: number;
  active_mask_hex: string;
  system_up: boolean;
  pe_health: Record<string, string>;
  pe_directory?: Record<string, string>;
  options?: number[];
}

export interface TraceRecord {
  kind: string;
  tick: number;
  [extra: string]: unknown;
}

export interface TraceBatch {
  records: TraceRecord[];
  next_since: number;
}

export type FaultAction = "fail" | "fail_silent" | "repair";

/** Everything the UI asks of the backend; the browser build uses the
 * HTTP implementation, tests plug in a mock. The UI never computes
 * reliability or selection itself: every displayed number comes from
 * one of these calls. */
export interface Service {
  health(): Promise<{ status: string }>;
  validate(doc: GraphDocument): Promise<ValidationSummary>;
  pipelines(doc: GraphDocument): Promise<{ pipelines: PipelineInfo[] }>;
  rank(doc: GraphDocument, tRef?: number): Promise<RankingPayload>;
  curvesCsv(doc: GraphDocument, tMax: number, n: number, tRef?: number): Promise<string>;
  exportOptions(doc: GraphDocument, paperCompat?: boolean): Promise<string>;
  createSession(doc: GraphDocument, scenario?: object): Promise<{ session_id: string; state: SimState }>;
  step(sessionId: string, n: number): Promise<SimState>;
  fault(sessionId: string, node: string, action: FaultAction): Promise<SimState>;
  repair(sessionId: string, node: string): Promise<SimState>;
  state(sessionId: string): Promise<SimState>;
  trace(sessionId: string, since: number): Promise<TraceBatch>;
}
