"""Regenerate src/affind/data/gcm_catalog.json from the matrix constructors."""

import json
from pathlib import Path

from affind.root_core import catalog_document

OUT = Path(__file__).resolve().parents[1] / "src" / "affind" / "data" / "gcm_catalog.json"

if __name__ == "__main__":
    doc = catalog_document()
    OUT.write_text(json.dumps(doc, indent=1) + "\n")
    print(f"wrote {len(doc['entries'])} entries to {OUT}")
