/** Wire types mirroring the annotation service API. */

export type Category = "NoError" | "NotInNotes" | "Incorrect" | "Missing";
export type Severity = "Minor" | "Critical";

export interface AnnotationRecord {
  element_id: string;
  summary_id: string;
  sent_idx: number;
  category: Category;
  severity: Severity | null;
  annotator_id: string;
  wall_time: string;
}

export interface SummaryElement {
  element_id: string;
  char_span: [number, number]; // byte offsets into the UTF-8 sentence text
  surface: string;
  cuis: string[];
}

export interface SummarySentence {
  sent_idx: number;
  text: string;
  elements: SummaryElement[];
}

export interface SummaryPayload {
  summary: {
    summary_id: string;
    admission_id: string;
    kind: string;
    sentences: SummarySentence[];
  };
  elements: Record<
    string,
    { state: "Annotated" | "NoAnnotation"; by_annotator: Record<string, AnnotationRecord> }
  >;
}

export interface SentencePayload {
  anchor: string;
  text: string;
}

export interface SectionPayload {
  header: string;
  anchor: string;
  sentences: SentencePayload[];
}

export interface NotePayload {
  note_id: string;
  title: string;
  timestamp: string;
  anchor: string;
  sections: SectionPayload[];
}

export interface NotesPayload {
  admission_id: string;
  notes: NotePayload[];
}

export interface SearchHit {
  ref: { note_id: string; section_idx: number; sent_idx: number };
  anchor: string;
  snippet: string;
  match_offsets: [number, number][];
  note_title: string;
  timestamp: string;
}

export interface SearchResponse {
  query: string;
  hits: SearchHit[];
}

export interface ConceptMention {
  ref: { note_id: string; section_idx: number; sent_idx: number };
  anchor: string;
  text: string;
}

export interface ConceptResponse {
  cui: string;
  expanded_cuis: string[];
  mentions: ConceptMention[];
}

export interface Progress {
  per_annotator: Record<string, number>;
  total_elements: number;
  annotated_elements: number;
  fraction: number;
  complete: boolean;
}
