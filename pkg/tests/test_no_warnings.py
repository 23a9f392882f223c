import warnings
from pathlib import Path

from leibniz_gsb.hnn import build_presentation, check_embedding, normal_basis, verify_gsb
from leibniz_gsb.parser import parse_presentation, to_maps, to_subalgebra, to_table

DATA = Path(__file__).resolve().parents[1] / "data" / "presentations"


def test_no_runtime_warnings():
    f = parse_presentation((DATA / "hemisemidirect.pres").read_text())
    d, dp = to_maps(f)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        p = build_presentation(to_table(f), to_subalgebra(f), d, dp)
        assert verify_gsb(p, 3).ok
        assert check_embedding(p).ok
        normal_basis(p, 3)
