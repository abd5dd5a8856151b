/** Wire types mirroring the HTTP API responses. */

export interface ParameterSpec {
  name: string;
  type: "string" | "int" | "float" | "enum";
  default: unknown;
  required: boolean;
  minimum?: number;
  maximum?: number;
  choices?: string[];
}

export interface TechniqueDescriptor {
  name: string;
  input_kind: string;
  output_kind: string;
  parameters: ParameterSpec[];
}

export interface ArtifactEntry {
  id: string;
  name: string;
  kind: "xes" | "ela";
  created_at: string;
  source_id: string | null;
  op_count: number;
  byte_size: number;
}

export interface Statistics {
  case_count: number;
  event_count: number;
  distinct_activities: number;
  distinct_resources: number;
  first_timestamp: string | null;
  last_timestamp: string | null;
}

export interface OperationInfo {
  seq: number;
  technique: string;
  parameters: Record<string, string>;
  created_at: string;
}

export interface ArtifactDetail {
  entry: ArtifactEntry;
  statistics: Statistics | null;
  operations: OperationInfo[];
}

export interface JobRecord {
  id: string;
  artifact_in: string;
  technique: string;
  parameters: Record<string, unknown>;
  state: "running" | "done" | "failed";
  result: string | null;
  error: string | null;
  report: Record<string, unknown> | null;
  started_at: string | null;
  finished_at: string | null;
}

export interface DfgEdge {
  from: string;
  to: string;
  freq: number;
}

export interface DfgJson {
  edges: DfgEdge[];
}
