import itertools
import random

import pytest

from handoff_lab.errors import (
    InvalidParameterError,
    UnknownBaseStationError,
    UnsupportedHandoffTypeError,
)
from handoff_lab.topology import (
    AccessSystem,
    DelayProfile,
    ForeignAgent,
    HandoffType,
    NetworkTopology,
    classify_handoff,
    delay_for,
)


def two_system_topology() -> NetworkTopology:
    return NetworkTopology(
        systems=(
            AccessSystem(
                system_id="sys1",
                gfa_id="gfa1",
                fas=(
                    ForeignAgent(fa_id="fa1", bs_ids=("bs10", "bs11")),
                    ForeignAgent(fa_id="fa2", bs_ids=("bs12",)),
                ),
            ),
            AccessSystem(
                system_id="sys2",
                gfa_id="gfa2",
                fas=(ForeignAgent(fa_id="fa3", bs_ids=("bs20", "bs21")),),
            ),
        )
    )


# ----------------------------------------------------------------------
# classification
# ----------------------------------------------------------------------

def test_three_handoff_classes():
    topo = two_system_topology()
    assert classify_handoff(topo, "bs10", "bs11") is HandoffType.LINK_LAYER
    assert classify_handoff(topo, "bs11", "bs12") is HandoffType.INTRA_SYSTEM
    assert classify_handoff(topo, "bs12", "bs20") is HandoffType.INTER_SYSTEM
    assert classify_handoff(topo, "bs20", "bs21") is HandoffType.LINK_LAYER


def test_classification_is_symmetric():
    topo = two_system_topology()
    stations = ["bs10", "bs11", "bs12", "bs20", "bs21"]
    for a, b in itertools.combinations(stations, 2):
        assert classify_handoff(topo, a, b) is classify_handoff(topo, b, a)


def test_same_station_rejected():
    topo = two_system_topology()
    with pytest.raises(InvalidParameterError):
        classify_handoff(topo, "bs10", "bs10")


def test_unknown_station_named_in_error():
    topo = two_system_topology()
    with pytest.raises(UnknownBaseStationError) as err:
        classify_handoff(topo, "bs10", "bs99")
    assert "bs99" in str(err.value)
    with pytest.raises(UnknownBaseStationError) as err:
        classify_handoff(topo, "nope", "bs10")
    assert "nope" in str(err.value)


def test_classification_against_brute_force():
    # random topologies, compared with a direct membership scan
    rng = random.Random(71)
    for round_no in range(20):
        systems = []
        station_home = {}
        counter = itertools.count()
        for s in range(rng.randint(1, 4)):
            fas = []
            for f in range(rng.randint(1, 3)):
                bss = tuple(f"b{next(counter)}" for _ in range(rng.randint(1, 4)))
                fa = ForeignAgent(fa_id=f"f{s}_{f}", bs_ids=bss)
                fas.append(fa)
                for bs in bss:
                    station_home[bs] = (f"g{s}", fa.fa_id)
            systems.append(
                AccessSystem(system_id=f"s{s}", gfa_id=f"g{s}", fas=tuple(fas))
            )
        topo = NetworkTopology(systems=tuple(systems))
        stations = sorted(station_home)
        for _ in range(30):
            a, b = rng.sample(stations, 2) if len(stations) > 1 else (None, None)
            if a is None:
                break
            ga, fa = station_home[a]
            gb, fb = station_home[b]
            if fa == fb:
                expected = HandoffType.LINK_LAYER
            elif ga == gb:
                expected = HandoffType.INTRA_SYSTEM
            else:
                expected = HandoffType.INTER_SYSTEM
            assert classify_handoff(topo, a, b) is expected


def test_locate():
    topo = two_system_topology()
    assert topo.locate("bs12") == ("fa2", "gfa1")
    with pytest.raises(UnknownBaseStationError):
        topo.locate("missing")


# ----------------------------------------------------------------------
# structural validation
# ----------------------------------------------------------------------

def test_duplicate_identifiers_rejected():
    with pytest.raises(InvalidParameterError):
        NetworkTopology(
            systems=(
                AccessSystem(
                    system_id="s",
                    gfa_id="g1",
                    fas=(
                        ForeignAgent(fa_id="f1", bs_ids=("b1",)),
                        ForeignAgent(fa_id="f2", bs_ids=("b1",)),
                    ),
                ),
            )
        )
    with pytest.raises(InvalidParameterError):
        NetworkTopology(
            systems=(
                AccessSystem(
                    system_id="dup",
                    gfa_id="dup",
                    fas=(ForeignAgent(fa_id="f1", bs_ids=("b1",)),),
                ),
            )
        )


def test_empty_containers_rejected():
    with pytest.raises(InvalidParameterError):
        ForeignAgent(fa_id="f", bs_ids=())
    with pytest.raises(InvalidParameterError):
        AccessSystem(system_id="s", gfa_id="g", fas=())
    with pytest.raises(InvalidParameterError):
        NetworkTopology(systems=())


def test_home_agent_ids_may_repeat():
    # one home agent can anchor several access systems
    topo = NetworkTopology(
        systems=(
            AccessSystem(
                system_id="s1",
                gfa_id="g1",
                fas=(ForeignAgent(fa_id="f1", bs_ids=("b1",)),),
                ha_id="home",
            ),
            AccessSystem(
                system_id="s2",
                gfa_id="g2",
                fas=(ForeignAgent(fa_id="f2", bs_ids=("b2",)),),
                ha_id="home",
            ),
        )
    )
    assert classify_handoff(topo, "b1", "b2") is HandoffType.INTER_SYSTEM


# ----------------------------------------------------------------------
# delays
# ----------------------------------------------------------------------

def test_default_delays():
    profile = DelayProfile()
    assert delay_for(profile, HandoffType.INTRA_SYSTEM) == 1.5
    assert delay_for(profile, HandoffType.INTER_SYSTEM) == 3.0


def test_link_layer_delay_requires_opt_in():
    with pytest.raises(UnsupportedHandoffTypeError):
        delay_for(DelayProfile(), HandoffType.LINK_LAYER)
    assert delay_for(DelayProfile(link_layer_s=0.5), HandoffType.LINK_LAYER) == 0.5
    assert delay_for(DelayProfile(link_layer_s=0.0), HandoffType.LINK_LAYER) == 0.0


def test_delay_profile_validation():
    with pytest.raises(InvalidParameterError):
        DelayProfile(intra_s=0.0)
    with pytest.raises(InvalidParameterError):
        DelayProfile(intra_s=2.0, inter_s=1.0)
    with pytest.raises(InvalidParameterError):
        DelayProfile(link_layer_s=-0.1)


# ----------------------------------------------------------------------
# dictionary construction
# ----------------------------------------------------------------------

def test_from_dict_round_trip():
    doc = {
        "systems": [
            {
                "system_id": "sys1",
                "gfa_id": "gfa1",
                "ha_id": "ha0",
                "fas": [
                    {"fa_id": "fa1", "bs_ids": ["bs10", "bs11"]},
                    {"fa_id": "fa2", "bs_ids": ["bs12"]},
                ],
            },
            {
                "system_id": "sys2",
                "gfa_id": "gfa2",
                "fas": [{"fa_id": "fa3", "bs_ids": ["bs20", "bs21"]}],
            },
        ]
    }
    topo = NetworkTopology.from_dict(doc)
    assert topo.systems[0].ha_id == "ha0"
    assert topo.systems[1].ha_id is None
    assert classify_handoff(topo, "bs10", "bs12") is HandoffType.INTRA_SYSTEM
    assert classify_handoff(topo, "bs12", "bs21") is HandoffType.INTER_SYSTEM


def test_from_dict_error_paths():
    with pytest.raises(InvalidParameterError) as err:
        NetworkTopology.from_dict({"systems": [{"gfa_id": "g"}]})
    assert "systems[0]" in str(err.value)
    with pytest.raises(InvalidParameterError) as err:
        NetworkTopology.from_dict(
            {"systems": [{"system_id": "s", "gfa_id": "g", "fas": [{"fa_id": "f"}]}]}
        )
    assert "systems[0].fas[0]" in str(err.value)
    with pytest.raises(InvalidParameterError):
        NetworkTopology.from_dict({})
    with pytest.raises(InvalidParameterError):
        NetworkTopology.from_dict({"systems": "oops"})
