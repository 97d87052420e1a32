/** Wire types for the zoologic HTTP API. Shapes mirror the server exactly. */

export type Task = "counting" | "existence" | "location";

/** xyxy pixel corners, top-left origin. */
export type Box = [number, number, number, number];

export interface TraceStep {
  goal: string;
  outcome: string;
  clause: string;
}

interface AnswerBase {
  entities: string[];
  trace: TraceStep[];
}

export interface CountingAnswer extends AnswerBase {
  task: "counting";
  results: Record<string, number>;
}

export interface ExistenceAnswer extends AnswerBase {
  task: "existence";
  results: Record<string, boolean>;
}

export interface LocationAnswer extends AnswerBase {
  task: "location";
  results: Record<string, Box[]>;
}

export type Answer = CountingAnswer | ExistenceAnswer | LocationAnswer;

export interface ImageInfo {
  id: string;
  width: number;
  height: number;
  classes: Record<string, number>;
}

export interface ParsedQuery {
  raw: string;
  entities: string[];
  task: Task;
  scores: Record<string, number>;
}

export interface QueryResponse {
  answer: Answer;
  parsed_query: ParsedQuery;
}

/** Body of a 422 response: the question could not be routed or grounded. */
export interface QueryRejection {
  code: string;
  message: string;
  question: string;
}
