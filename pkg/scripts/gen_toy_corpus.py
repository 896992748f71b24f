"""Regenerate the bundled toy corpus under data/toy/.

The corpus is tiny but exercises every input surface: duplicated source
sentences across notes, summary elements with CUIs, annotations, entity
mentions, a relation table, and a sidecar with embeddings, token
log-likelihoods, fake-token probabilities, NLI triples, supported-label
probabilities, and revised texts.
"""

import json
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent / "data" / "toy"

ADMISSION = {
    "admission_id": "TOY-1",
    "patient_meta": {"cohort": "demo"},
    "notes": [
        {
            "note_id": "n1",
            "title": "Admission Note",
            "timestamp": "2011-03-02T08:00:00",
            "sections": [
                {
                    "header": "HPI",
                    "sentences": [
                        "Patient admitted with fever and cough.",
                        "HIV positive on HAART.",
                    ],
                },
                {
                    "header": "Plan",
                    "sentences": [
                        "Start ceftriaxone for pneumonia.",
                        "Continue HAART.",
                    ],
                },
            ],
        },
        {
            "note_id": "n2",
            "title": "Progress Note",
            "timestamp": "2011-03-03T09:00:00",
            "sections": [
                {
                    "header": "Course",
                    "sentences": ["Fever resolved overnight.", "Continue HAART."],
                },
                {"header": "Labs", "sentences": ["WBC 11.2 trending down."]},
            ],
        },
        {
            "note_id": "n3",
            "title": "Discharge Summary",
            "timestamp": "2011-03-04T14:00:00",
            "sections": [
                {
                    "header": "Hospital Course",
                    "sentences": [
                        "Patient admitted with fever and cough.",
                        "Treated with ceftriaxone.",
                        "Discharged home in stable condition.",
                    ],
                }
            ],
        },
    ],
}

SYSTEM_SUMMARY = {
    "summary_id": "toy-sys",
    "admission_id": "TOY-1",
    "kind": "system",
    "sentences": [
        {
            "sent_idx": 0,
            "text": "Admitted with fever and cough.",
            "elements": [
                {"element_id": "e0", "char_span": [14, 19], "cuis": ["C0015967"]},
                {"element_id": "e1", "char_span": [24, 29], "cuis": ["C0010200"]},
            ],
        },
        {
            "sent_idx": 1,
            "text": "Treated with ceftriaxone for pneumonia.",
            "elements": [
                {"element_id": "e2", "char_span": [13, 24], "cuis": ["C0007561"]},
                {"element_id": "e3", "char_span": [29, 38], "cuis": ["C0032285"]},
            ],
        },
        {
            "sent_idx": 2,
            "text": "Discharged home on HAART.",
            "elements": [
                {"element_id": "e4", "char_span": [19, 24], "cuis": ["C1963724"]},
                {"element_id": "e5", "char_span": [0, 15], "cuis": []},
            ],
        },
    ],
}

REFERENCE_SUMMARY = {
    "summary_id": "toy-ref",
    "admission_id": "TOY-1",
    "kind": "reference",
    "sentences": [
        {
            "sent_idx": 0,
            "text": "Patient admitted with fever and cough, treated with ceftriaxone.",
            "elements": [],
        },
        {
            "sent_idx": 1,
            "text": "Discharged home in stable condition on HAART.",
            "elements": [],
        },
    ],
}

ANNOTATIONS = [
    {"element_id": "e0", "category": "NoError", "severity": None, "minute": 0},
    {"element_id": "e1", "category": "NoError", "severity": None, "minute": 1},
    {"element_id": "e2", "category": "NoError", "severity": None, "minute": 2},
    {"element_id": "e3", "category": "Incorrect", "severity": "Minor", "minute": 3},
    {"element_id": "e4", "category": "NoError", "severity": None, "minute": 4},
    {"element_id": "e5", "category": "Missing", "severity": "Minor", "minute": 5},
]

ELEMENT_SENTENCE = {"e0": 0, "e1": 0, "e2": 1, "e3": 1, "e4": 2, "e5": 2}

MENTIONS = [
    ("C0015967", "fever", "n1", 0, 0),
    ("C0015967", "Fever", "n2", 0, 0),
    ("C0015967", "fever", "n3", 0, 0),
    ("C0010200", "cough", "n1", 0, 0),
    ("C0010200", "cough", "n3", 0, 0),
    ("C0007561", "ceftriaxone", "n1", 1, 0),
    ("C0007561", "ceftriaxone", "n3", 0, 1),
    ("C0032285", "pneumonia", "n1", 1, 0),
    ("C1963724", "HAART", "n1", 0, 1),
    ("C1963724", "HAART", "n1", 1, 1),
    ("C1963724", "HAART", "n2", 0, 1),
    ("C0019682", "HIV", "n1", 0, 1),
]

RELATIONS = [
    ("C0007561", "C0086416", 0.02, 0.08, 0.90),  # ceftriaxone ~ brand name
    ("C0007561", "C0003232", 0.10, 0.85, 0.05),  # ceftriaxone related to antibiotics
    ("C1963724", "C0019682", 0.20, 0.75, 0.05),  # regimen related to the condition
    ("C0032285", "C0032285X", 0.05, 0.05, 0.90),  # pneumonia coding variant
]


def unique_source_keys():
    """Representative refs in document order, mirroring the dedup index."""
    seen = {}
    keys = []
    for note in ADMISSION["notes"]:
        for sec_idx, section in enumerate(note["sections"]):
            for sent_idx, text in enumerate(section["sentences"]):
                canon = " ".join(text.lower().replace(".", "").replace(",", "").split())
                if canon in seen:
                    continue
                seen[canon] = True
                keys.append(
                    (f"src::TOY-1::{note['note_id']}::{sec_idx}::{sent_idx}", text)
                )
    return keys


def token_embedding(rng, text, dim=8):
    rows = np.stack([rng.normal(size=dim) for _ in text.split()])
    return (rows / np.linalg.norm(rows, axis=1, keepdims=True)).round(6)


def main():
    ROOT.mkdir(parents=True, exist_ok=True)
    (ROOT / "admission.json").write_text(json.dumps(ADMISSION, indent=2) + "\n")
    (ROOT / "summary.json").write_text(json.dumps(SYSTEM_SUMMARY, indent=2) + "\n")
    (ROOT / "reference.json").write_text(json.dumps(REFERENCE_SUMMARY, indent=2) + "\n")

    lines = []
    for ann in ANNOTATIONS:
        lines.append(
            json.dumps(
                {
                    "element_id": ann["element_id"],
                    "summary_id": "toy-sys",
                    "sent_idx": ELEMENT_SENTENCE[ann["element_id"]],
                    "category": ann["category"],
                    "severity": ann["severity"],
                    "annotator_id": "ann1",
                    "wall_time": f"2026-02-01T10:{ann['minute']:02d}:00",
                }
            )
        )
    (ROOT / "annotations.jsonl").write_text("\n".join(lines) + "\n")

    lines = [
        json.dumps(
            {
                "cui": cui,
                "surface": surface,
                "location": {"note_id": n, "section_idx": s, "sent_idx": i},
            }
        )
        for cui, surface, n, s, i in MENTIONS
    ]
    (ROOT / "mentions.jsonl").write_text("\n".join(lines) + "\n")

    rows = ["cui_a,cui_b,p_unrelated,p_related,p_synonym"]
    rows += [f"{a},{b},{pu},{pr},{ps}" for a, b, pu, pr, ps in RELATIONS]
    (ROOT / "relations.csv").write_text("\n".join(rows) + "\n")

    rng = np.random.default_rng(20260210)
    sidecar = {
        "embeddings": {},
        "token_logprobs": {},
        "summary_logprobs": {},
        "token_fake_probs": {},
        "nli_probs": {},
        "supported_probs": {},
        "revised_texts": {"toy-sys": []},
        "summary_embedding_boundaries": {},
    }

    src_keys = unique_source_keys()
    for key, text in src_keys:
        sidecar["embeddings"][key] = token_embedding(rng, text).tolist()

    sum_rows = []
    boundaries = []
    for sent in SYSTEM_SUMMARY["sentences"]:
        idx = sent["sent_idx"]
        emb = token_embedding(rng, sent["text"])
        sidecar["embeddings"][f"sum::toy-sys::{idx}"] = emb.tolist()
        boundaries.append([len(sum_rows), len(sum_rows) + emb.shape[0]])
        sum_rows.extend(emb.tolist())
        # revision: shift one token's embedding to mimic a light edit
        revised = emb.copy()
        revised[0] = np.roll(revised[0], 1)
        sidecar["embeddings"][f"rev::toy-sys::{idx}"] = revised.round(6).tolist()
        sidecar["revised_texts"]["toy-sys"].append(sent["text"])

        n_tokens = len(sent["text"].split())
        logprobs = (-np.abs(rng.normal(0.8, 0.4, size=n_tokens))).round(4)
        sidecar["token_logprobs"][f"toy-sys::{idx}::default"] = logprobs.tolist()
        fakes = rng.uniform(0, 0.4, size=n_tokens).round(4)
        if idx == 1:
            fakes[-1] = 0.93  # the incorrectly fused detail
        sidecar["token_fake_probs"][f"toy-sys::{idx}::default"] = fakes.tolist()
        supported = {0: 0.95, 1: 0.55, 2: 0.80}[idx]
        sidecar["supported_probs"][f"toy-sys::{idx}::default"] = supported
        for key, _ in src_keys:
            raw = rng.dirichlet([1.0, 1.0, 2.0])
            triple = (raw / raw.sum()).round(6)
            triple[2] = 1.0 - triple[0] - triple[1]
            sidecar["nli_probs"][f"toy-sys::{idx}::{key}"] = [
                round(float(x), 6) for x in triple
            ]
        sidecar["nli_probs"][f"toy-sys::{idx}::FULL"] = [0.05, 0.15, 0.80]

    sidecar["embeddings"]["sumfull::toy-sys"] = sum_rows
    sidecar["summary_embedding_boundaries"]["toy-sys"] = boundaries

    full_logprobs = []
    lp_bounds = []
    for sent in SYSTEM_SUMMARY["sentences"]:
        arr = sidecar["token_logprobs"][f"toy-sys::{sent['sent_idx']}::default"]
        lp_bounds.append([len(full_logprobs), len(full_logprobs) + len(arr)])
        full_logprobs.extend(arr)
    sidecar["summary_logprobs"]["toy-sys::default"] = {
        "values": full_logprobs,
        "boundaries": lp_bounds,
    }

    (ROOT / "sidecar.json").write_text(json.dumps(sidecar, indent=2) + "\n")

    # the same corpus in the directory layout `faithbench serve` expects
    service_root = ROOT.parent / "toy-service"
    (service_root / "admissions").mkdir(parents=True, exist_ok=True)
    (service_root / "summaries").mkdir(parents=True, exist_ok=True)
    (service_root / "admissions" / "toy1.json").write_text(
        json.dumps(ADMISSION, indent=2) + "\n"
    )
    (service_root / "summaries" / "toy-sys.json").write_text(
        json.dumps(SYSTEM_SUMMARY, indent=2) + "\n"
    )
    (service_root / "mentions.jsonl").write_text((ROOT / "mentions.jsonl").read_text())
    (service_root / "relations.csv").write_text((ROOT / "relations.csv").read_text())

    print(f"wrote toy corpus to {ROOT} and {service_root}")


if __name__ == "__main__":
    main()
