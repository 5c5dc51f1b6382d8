#!/usr/bin/env python3
"""Regenerates catalog/default-catalog.json.

The default catalog encodes the 13 AICM-shaped control families with their
declared counts. Titles are generic except where a control is named in the
framework text. Gate assignments come from the per-gate example control ids;
everything else defaults to gate 2.

Usage: tools/gen_default_catalog.py > catalog/default-catalog.json
"""

import json
import sys

PILLARS = [
    ("Cybersecurity", 0.15),
    ("Privacy", 0.15),
    ("EthicsBias", 0.15),
    ("Transparency", 0.10),
    ("Explainability", 0.10),
    ("Regulations", 0.15),
    ("Audit", 0.10),
    ("Accountability", 0.10),
]

# code, name, declared count, default pillars (primary first), default priority
FAMILIES = [
    ("GRC", "Governance, Risk & Compliance", 14, ["Regulations", "Accountability"], "High"),
    ("DSP", "Data Security & Privacy", 24, ["Privacy", "Cybersecurity"], "High"),
    ("IAM", "Identity & Access Management", 16, ["Cybersecurity", "Privacy"], "Medium"),
    ("MDS", "Model Development & Security", 13, ["Cybersecurity"], "High"),
    ("IVS", "Infrastructure Security", 13, ["Cybersecurity"], "Medium"),
    ("TVM", "Threat & Vulnerability Management", 9, ["Cybersecurity"], "Medium"),
    ("LOG", "Logging & Monitoring", 15, ["Audit"], "Medium"),
    ("SIM", "Security Incident Management", 7, ["Cybersecurity", "Accountability"], "Medium"),
    ("BCR", "Business Continuity", 11, ["Cybersecurity", "Accountability"], "Medium"),
    ("EKM", "Encryption & Key Management", 5, ["Cybersecurity", "Privacy"], "Medium"),
    ("SEF", "Safety & Failure Management", 9, ["Accountability", "EthicsBias"], "Medium"),
    ("AMA", "Asset Management", 6, ["Transparency", "Accountability"], "Medium"),
    ("A&A", "Assessment & Audit", 6, ["Audit", "Accountability"], "High"),
]

# Named controls: id -> (title, priority or None, pillars or None)
NAMED = {
    "GRC-01": ("Governance Structure", "High", ["Accountability", "Regulations"]),
    "GRC-05": ("Risk Assessment Program", None, None),
    "GRC-07": ("Information System Regulatory Mapping", "High", ["Regulations"]),
    "GRC-10": ("AI Impact Assessment", "High", ["EthicsBias", "Regulations"]),
    "GRC-11": ("Fairness Testing", "Critical", ["EthicsBias"]),
    "GRC-12": ("Compliance Verification", None, None),
    "GRC-13": ("Explainability Requirements", "High", ["Explainability", "Transparency"]),
    "GRC-14": ("Model Risk Management", "High", ["Accountability", "Regulations"]),
    "DSP-01": ("Data Classification", "Critical", None),
    "DSP-03": ("Data Minimization", None, None),
    "DSP-04": ("Access Controls", "Critical", None),
    "DSP-07": ("Data Masking/Anonymization", None, None),
    "DSP-11": ("PII Detection in Training Data", "Critical", None),
    "DSP-15": ("Privacy Impact Assessment", None, None),
    "DSP-16": ("Secure Data Deletion", None, None),
    "DSP-17": ("Data Retention Enforcement", None, None),
    "DSP-18": ("Federated Learning", None, None),
    "DSP-20": ("Secure Multi-Party Computation", None, None),
    "MDS-02": ("Adversarial Attack Testing", "Critical", ["Cybersecurity", "EthicsBias"]),
    "MDS-05": ("Model Documentation", "Medium", ["Transparency", "Explainability"]),
    "MDS-06": ("Model Interpretability Tooling", "Medium", ["Explainability"]),
    "MDS-09": ("Fairness Constraints in Training", "High", ["EthicsBias"]),
    "MDS-10": ("Continuous Model Monitoring", None, ["Cybersecurity", "Audit"]),
    "IVS-01": ("Secure Architecture", "High", None),
    "AMA-01": ("AI Asset Inventory", "High", None),
    "AMA-02": ("AI System Classification", "High", ["Transparency", "Regulations"]),
    "A&A-01": ("Audit Policy", "High", None),
    "A&A-02": ("Independent Assessments", "High", None),
    "A&A-03": ("Risk Acceptance Authority", "High", ["Accountability"]),
}

CHECKS = {
    "GRC-11": "DemographicParity",
    "MDS-02": "RobustnessThreshold",
    "DSP-11": "PiiScan",
}


def expand(spec):
    """'DSP-01..DSP-12' -> list of ids; plain ids pass through."""
    if ".." not in spec:
        return [spec]
    lo, hi = spec.split("..")
    fam = lo.rsplit("-", 1)[0]
    a = int(lo.rsplit("-", 1)[1])
    b = int(hi.rsplit("-", 1)[1])
    return [f"{fam}-{n:02d}" for n in range(a, b + 1)]


# Earliest gate wins when a control appears under several gates.
GATES = [
    (0, ["MDS-01", "DSP-15", "GRC-05", "GRC-12", "GRC-01", "GRC-07", "GRC-10",
         "A&A-01", "A&A-03", "AMA-01", "AMA-02"]),
    (1, ["DSP-01..DSP-12", "MDS-11", "LOG-01"]),
    (2, ["MDS-03", "MDS-06", "MDS-08", "SEF-01..SEF-05", "DSP-07", "DSP-19"]),
    (3, ["MDS-02", "MDS-07", "TVM-05", "GRC-11", "DSP-13", "DSP-14"]),
    (4, ["MDS-04", "MDS-12..MDS-15", "IAM-01..IAM-06"]),
    (5, ["MDS-10", "LOG-02", "LOG-05", "DSP-08", "DSP-09"]),
]
DEFAULT_GATE = 2

TABLE_MINIMUMS = {
    "Cybersecurity": [40, 60, 70, 80, 90, 90],
    "Privacy": [50, 70, 75, 85, 90, 90],
    "EthicsBias": [40, 50, 70, 85, 90, 90],
    "Transparency": [30, 50, 60, 75, 90, 90],
    "Explainability": [30, 40, 60, 80, 90, 90],
    "Regulations": [50, 60, 70, 80, 90, 90],
    "Audit": [30, 50, 65, 80, 90, 90],
    "Accountability": [50, 60, 70, 80, 90, 90],
}
MIN_CONTROLS = [30, 45, 50, 60, 70, 80]


def main():
    gate_of = {}
    for gate, specs in GATES:
        for spec in specs:
            for cid in expand(spec):
                gate_of.setdefault(cid, gate)

    controls = []
    for code, name, count, pillars, prio in FAMILIES:
        for n in range(1, count + 1):
            cid = f"{code}-{n:02d}"
            title, named_prio, named_pillars = NAMED.get(cid, (f"{name} Control {n:02d}", None, None))
            entry = {
                "id": cid,
                "family": code,
                "title": title,
                "priority": named_prio or prio,
                "pillars": named_pillars or pillars,
                "required_from_gate": gate_of.get(cid, DEFAULT_GATE),
            }
            if cid in CHECKS:
                entry["check_binding"] = CHECKS[cid]
            controls.append(entry)

    phases = []
    for phase in range(6):
        phases.append({
            "phase": phase,
            "per_pillar_min": {p: TABLE_MINIMUMS[p][phase] for p, _ in PILLARS},
            "min_cumulative_controls": MIN_CONTROLS[phase],
        })
    phases.append({"phase": 6, "min_cumulative_controls": MIN_CONTROLS[-1]})

    doc = {
        "pillars": [{"id": p, "weight": w} for p, w in PILLARS],
        "families": [{"code": c, "name": n, "declared_count": k} for c, n, k, _, _ in FAMILIES],
        "controls": controls,
        "phases": phases,
        "priority_min_ranges": {
            "Critical": [85, 95],
            "High": [75, 85],
            "Standard": [60, 75],
            "Low": [50, 65],
        },
    }
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
