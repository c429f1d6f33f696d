"""Desk-scale language packs used as the test corpus.

Each pack bundles one language definition, at least two models and the
golden export/report files they must reproduce byte for byte. Run
``python -m gopprr.fixtures`` to regenerate the goldens after an
intentional format change, or ``--check`` to confirm they still match.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..core import GopprrError, MetaModel, Model
from ..dsl import parse_metamodel, parse_model

PACK_NAMES = ("mini_bpmn", "mini_sysml")

DATA_ROOT = Path(__file__).resolve().parent / "data"


class UnknownPackError(GopprrError):
    """The requested language pack does not exist."""


class PackLoadError(GopprrError):
    """A pack document failed to parse or validate; the cause is chained."""

    def __init__(self, pack: str, source: Path, cause: GopprrError):
        super().__init__(f"pack {pack!r}, file {source.name}: {cause}")
        self.pack = pack
        self.source = source


@dataclass(frozen=True)
class LanguagePack:
    name: str
    metamodel: MetaModel
    models: dict[str, Model]
    path: Path

    @property
    def golden_dir(self) -> Path:
        return self.path / "golden"


def pack_dir(name: str) -> Path:
    if name not in PACK_NAMES:
        raise UnknownPackError(f"unknown pack {name!r}; available: {', '.join(PACK_NAMES)}")
    return DATA_ROOT / name


def metamodel_path(name: str) -> Path:
    return pack_dir(name) / f"{name}.gopprr.json"


def model_paths(name: str) -> list[Path]:
    return sorted(pack_dir(name).glob("*.model.json"))


def load_pack(name: str) -> LanguagePack:
    """Parse and validate one pack; any document error surfaces with pack context."""
    directory = pack_dir(name)
    source = metamodel_path(name)
    try:
        metamodel = parse_metamodel(source.read_text(encoding="utf-8"))
        models = {}
        for source in model_paths(name):
            models[source.name.removesuffix(".model.json")] = parse_model(
                source.read_text(encoding="utf-8"), metamodel
            )
    except GopprrError as exc:
        raise PackLoadError(name, source, exc) from exc
    return LanguagePack(name=name, metamodel=metamodel, models=models, path=directory)
