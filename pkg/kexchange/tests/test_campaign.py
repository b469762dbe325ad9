import csv
import io

from kexchange.campaign import (
    CSV_COLUMNS,
    build_instances,
    run_campaign,
    write_csv,
)
from kexchange.enums import Algorithm
from kexchange.io import save_instance
from kexchange.models import CampaignSpec, GeneratorSpec


def _csv(rows) -> list[dict]:
    out = io.StringIO()
    write_csv(rows, out)
    return list(csv.DictReader(io.StringIO(out.getvalue())))


def _grid(**kwargs) -> CampaignSpec:
    return CampaignSpec(
        name="grid",
        seed=10,
        generators=[
            GeneratorSpec(n_min=3, n_max=5, k=2, universe_size=6, repetitions=2)
        ],
        **kwargs,
    )


def test_build_instances(tmp_path, oscillation):
    save_instance(oscillation, tmp_path / "osc.kx")
    spec = _grid(instance_files=["osc.kx"])
    instances = build_instances(spec, base_dir=tmp_path)
    ids = [instance_id for instance_id, _ in instances]
    assert ids[:3] == ["grid-g0-n3-r0", "grid-g0-n3-r1", "grid-g0-n4-r0"]
    assert ids[-1] == "oscillation"
    assert len(ids) == 7
    assert [instance.seed for _, instance in instances[:6]] == list(range(10, 16))


def test_campaign_on_fixture(tmp_path, oscillation):
    save_instance(oscillation, tmp_path / "osc.kx")
    spec = CampaignSpec(
        instance_files=[str(tmp_path / "osc.kx")],
        algorithms=list(Algorithm),
        audit=True,
    )
    rows = {row.algorithm: row for row in run_campaign(spec)}
    assert len(rows) == 5

    nols = rows[Algorithm.nols]
    assert (nols.value, nols.opt_value, nols.ratio) == (3, 3, 1)
    assert nols.improvements == 1
    assert nols.audit == "pass"
    assert nols.bound == 3

    assert rows[Algorithm.greedy].improvements == 2
    assert rows[Algorithm.oblivious].improvements == 0
    assert rows[Algorithm.naive].note == "cycle:2"
    assert rows[Algorithm.linear_nols].error.startswith("PreconditionError: ")
    assert rows[Algorithm.linear_nols].value is None


def test_literal_campaign_skips_audit(tmp_path, oscillation):
    save_instance(oscillation, tmp_path / "osc.kx")
    spec = CampaignSpec(
        instance_files=[str(tmp_path / "osc.kx")], audit=True, literal_pseudocode=True
    )
    (row,) = run_campaign(spec)
    assert row.note == "literal"
    assert row.audit == ""


def test_csv_layout():
    spec = _grid(epsilons=["1/4", "1/2"], algorithms=["nols", "greedy"], audit=True)
    records = _csv(run_campaign(spec))
    assert list(records[0]) == CSV_COLUMNS
    assert len(records) == 6 * 2 * 2
    first = records[0]
    assert (first["instance_id"], first["algorithm"]) == ("grid-g0-n3-r0", "nols")
    assert first["epsilon"] == "0.250000"
    assert first["bound"] == "2.750000"
    assert [r["epsilon"] for r in records[:4]] == ["0.250000", "0.500000"] * 2
    assert all(r["audit"] == "pass" for r in records if r["algorithm"] == "nols")


def test_rows_do_not_depend_on_workers():
    spec = _grid(algorithms=["nols", "naive", "oblivious"], audit=True)

    def without_time(rows):
        return [
            {key: value for key, value in record.items() if key != "wall_time"}
            for record in _csv(rows)
        ]

    assert without_time(run_campaign(spec, workers=1)) == without_time(
        run_campaign(spec, workers=2)
    )


def test_no_algorithms_gives_header_only():
    out = io.StringIO()
    write_csv(run_campaign(_grid(algorithms=[])), out)
    assert out.getvalue() == ",".join(CSV_COLUMNS) + "\n"


def test_optimum_above_brute_cap(tmp_path):
    path = tmp_path / "rows.csv"
    write_csv(run_campaign(_grid(brute_cap=3)), path)
    records = list(csv.DictReader(path.open()))
    by_n = {record["n"]: record for record in records}
    assert by_n["3"]["opt_value"] != ""
    assert by_n["5"]["opt_value"] == ""
    assert by_n["5"]["ratio"] == ""
