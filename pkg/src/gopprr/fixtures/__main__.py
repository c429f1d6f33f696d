"""Regenerate (or check) the golden files of every language pack."""

from __future__ import annotations

import argparse
import sys

from ..kgexport import export_metamodel, export_model, serialize_ntriples
from ..query import completeness_report, logic_report
from . import PACK_NAMES, load_pack


def golden_contents(pack_name: str) -> dict[str, str]:
    """All golden files of one pack, filename -> exact text."""
    from ..cli import format_stats  # deferred: keeps fixtures importable without matplotlib

    pack = load_pack(pack_name)
    out = {
        f"{pack.name}.nt": serialize_ntriples(export_metamodel(pack.metamodel)),
        f"{pack.name}.stats.tsv": format_stats(pack.metamodel) + "\n",
    }
    for model_name, model in pack.models.items():
        ts = export_model(pack.metamodel, model)
        out[f"{model_name}.nt"] = serialize_ntriples(ts)
        out[f"{model_name}.completeness.tsv"] = "".join(line + "\n" for line in completeness_report(ts).to_lines())
        out[f"{model_name}.logic.tsv"] = "".join(line + "\n" for line in logic_report(ts).to_lines())
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="python -m gopprr.fixtures", description=__doc__)
    parser.add_argument("--check", action="store_true", help="compare instead of rewriting; exit 1 on drift")
    args = parser.parse_args(argv)

    drift = 0
    for pack_name in PACK_NAMES:
        pack = load_pack(pack_name)
        pack.golden_dir.mkdir(exist_ok=True)
        for filename, text in golden_contents(pack_name).items():
            target = pack.golden_dir / filename
            if args.check:
                current = target.read_text(encoding="utf-8") if target.exists() else None
                if current != text:
                    print(f"DRIFT {target}", file=sys.stderr)
                    drift = 1
                else:
                    print(f"ok    {target}")
            else:
                target.write_text(text, encoding="utf-8")
                print(f"wrote {target}")
    return drift


if __name__ == "__main__":
    sys.exit(main())
