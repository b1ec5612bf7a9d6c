"""JSON instance files: parsing, validation, and lossless serialization.

A file describes one agreement problem: the contract universe, one choice
block per side, optional per-contract labels, and an optional market
section (price grid, templates, per-contract tuples).  Choice blocks are
either a single function over the whole universe::

    "side1": {"variant": "table", "map": [{"in": [], "out": []}, ...]}

or a partition into agents, each with its own function over its slice::

    "side1": {"agents": {"m1": {"contracts": ["m1_w1", "m1_w2"],
                                "choice": {"variant": "top_of_order",
                                           "order": ["m1_w1", "m1_w2"]}}}}

Within a block, contracts are referred to by name; subsets are arrays of
names.  Exact rationals are written as ints or ``"p/q"`` strings (floats
are rejected).  Unknown variant tags and malformed payloads raise
:class:`~contractmatch.errors.ParseError` carrying the dotted position of
the offending element.  ``parse -> serialize -> parse`` is the identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Sequence

from .aggregation import AggregateChoice, AggregatePart
from .choice import (
    ChoiceFunction,
    Identity,
    PerturbationScheme,
    ResponsiveQuota,
    TableChoice,
    TopOfOrder,
    UnionOfOrders,
    ValuationArgmax,
)
from .engine import ContractLabel, Instance
from .errors import ParseError
from .market import (
    LinearProducerChoice,
    MarketContract,
    MoneyEconomy,
    UnitDemandConsumerChoice,
    build_linear_producer,
    build_unit_demand_consumer,
)
from .sets import format_mask, ids_of

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class LoadedFile:
    """Result of parsing one instance file."""

    instance: Instance
    economy: MoneyEconomy | None
    meta: dict


# ---------------------------------------------------------------------------
# Small parse helpers
# ---------------------------------------------------------------------------


def _expect(condition: bool, message: str, loc: str) -> None:
    if not condition:
        raise ParseError(message, loc)


def _expect_dict(value: Any, loc: str) -> dict:
    _expect(isinstance(value, dict), f"expected an object, got {type(value).__name__}", loc)
    return value


def _expect_list(value: Any, loc: str) -> list:
    _expect(isinstance(value, list), f"expected an array, got {type(value).__name__}", loc)
    return value


def _expect_str(value: Any, loc: str) -> str:
    _expect(isinstance(value, str), f"expected a string, got {type(value).__name__}", loc)
    return value


def _expect_int(value: Any, loc: str) -> int:
    _expect(
        isinstance(value, int) and not isinstance(value, bool),
        f"expected an integer, got {value!r}",
        loc,
    )
    return value


def _parse_fraction(value: Any, loc: str) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"expected an exact number, got {value!r}", loc)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a valid rational: {value!r}", loc) from None
    raise ParseError(
        f"expected an int or 'p/q' string (floats are inexact), got {value!r}", loc
    )


def _fraction_to_json(value: Fraction) -> int | str:
    return int(value) if value.denominator == 1 else str(value)


def _parse_subset(value: Any, index: Mapping[str, int], loc: str) -> int:
    names = _expect_list(value, loc)
    mask = 0
    for i, raw in enumerate(names):
        name = _expect_str(raw, f"{loc}[{i}]")
        _expect(name in index, f"unknown contract name {name!r}", f"{loc}[{i}]")
        b = 1 << index[name]
        _expect(not mask & b, f"contract {name!r} listed twice", f"{loc}[{i}]")
        mask |= b
    return mask


def _subset_to_json(mask: int, names: Sequence[str]) -> list[str]:
    return sorted(names[i] for i in ids_of(mask))


# ---------------------------------------------------------------------------
# Choice-spec blocks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _MarketContext:
    """Market data a producer/consumer spec needs: the grid plus the slice's tuples."""

    grid: tuple[int, ...]
    templates: tuple[str, ...]
    slice_contracts: tuple[MarketContract, ...]


def _parse_spec(
    block: Any,
    local_names: Sequence[str],
    loc: str,
    side: int,
    market: _MarketContext | None,
) -> ChoiceFunction:
    body = _expect_dict(block, loc)
    _expect("variant" in body, "choice block needs a 'variant' tag", loc)
    tag = _expect_str(body["variant"], f"{loc}.variant")
    k = len(local_names)
    index = {name: i for i, name in enumerate(local_names)}

    if tag == "identity":
        return Identity(k)

    if tag == "table":
        rows = _expect_list(body.get("map"), f"{loc}.map")
        entries: dict[int, int] = {}
        for i, raw in enumerate(rows):
            row = _expect_dict(raw, f"{loc}.map[{i}]")
            key = _parse_subset(row.get("in"), index, f"{loc}.map[{i}].in")
            _expect(key not in entries, "duplicate 'in' subset", f"{loc}.map[{i}].in")
            entries[key] = _parse_subset(row.get("out"), index, f"{loc}.map[{i}].out")
        for m in range(1 << k):
            _expect(
                m in entries,
                f"table must define every subset exactly once;"
                f" missing {format_mask(m, local_names)}",
                f"{loc}.map",
            )
        return TableChoice(k, tuple(entries[m] for m in range(1 << k)))

    if tag == "top_of_order":
        order = _parse_order(body.get("order"), index, f"{loc}.order")
        return TopOfOrder(k, order)

    if tag == "responsive_quota":
        order = _parse_order(body.get("order"), index, f"{loc}.order")
        quota = _expect_int(body.get("quota"), f"{loc}.quota")
        return ResponsiveQuota(k, order, quota)

    if tag == "union_of_orders":
        raw_orders = _expect_list(body.get("orders"), f"{loc}.orders")
        orders = tuple(
            _parse_order(raw, index, f"{loc}.orders[{i}]")
            for i, raw in enumerate(raw_orders)
        )
        _expect(bool(orders), "need at least one order", f"{loc}.orders")
        return UnionOfOrders(k, orders)

    if tag == "valuation_argmax":
        rows = _expect_list(body.get("values"), f"{loc}.values")
        table: dict[int, Fraction] = {}
        for i, raw in enumerate(rows):
            row = _expect_dict(raw, f"{loc}.values[{i}]")
            key = _parse_subset(row.get("set"), index, f"{loc}.values[{i}].set")
            _expect(key not in table, "duplicate subset", f"{loc}.values[{i}].set")
            table[key] = _parse_fraction(row.get("value"), f"{loc}.values[{i}].value")
        for m in range(1 << k):
            _expect(
                m in table,
                f"valuation must cover every subset; missing {format_mask(m, local_names)}",
                f"{loc}.values",
            )
        values = tuple(table[m] for m in range(1 << k))
        scheme = None
        if "prices" in body:
            _expect("epsilon" in body, "'prices' requires 'epsilon'", loc)
            raw_prices = _expect_list(body["prices"], f"{loc}.prices")
            _expect(
                len(raw_prices) == k,
                f"need one price per contract ({k}), got {len(raw_prices)}",
                f"{loc}.prices",
            )
            scheme = PerturbationScheme(
                _parse_fraction(body["epsilon"], f"{loc}.epsilon"),
                tuple(
                    _parse_fraction(p, f"{loc}.prices[{i}]")
                    for i, p in enumerate(raw_prices)
                ),
            )
        elif "epsilon" in body:
            scheme = PerturbationScheme.dyadic(
                k, _parse_fraction(body["epsilon"], f"{loc}.epsilon")
            )
        else:
            scheme = PerturbationScheme.for_valuation(values)
        return ValuationArgmax(k, values, scheme)

    if tag == "linear_producer":
        _expect(side == 1, "linear_producer agents belong on side 1", loc)
        _expect(market is not None, "linear_producer needs a market section", loc)
        costs = _parse_agent_numbers(body.get("costs"), market, f"{loc}.costs")
        return build_linear_producer(market.slice_contracts, market.grid, costs)

    if tag == "unit_demand_consumer":
        _expect(side == 2, "unit_demand_consumer agents belong on side 2", loc)
        _expect(market is not None, "unit_demand_consumer needs a market section", loc)
        wtp = _parse_agent_numbers(body.get("wtp"), market, f"{loc}.wtp")
        return build_unit_demand_consumer(market.slice_contracts, market.grid, wtp)

    raise ParseError(f"unknown variant {tag!r}", f"{loc}.variant")


def _parse_order(value: Any, index: Mapping[str, int], loc: str) -> tuple[int, ...]:
    names = _expect_list(value, loc)
    order = []
    seen = set()
    for i, raw in enumerate(names):
        name = _expect_str(raw, f"{loc}[{i}]")
        _expect(name in index, f"unknown contract name {name!r}", f"{loc}[{i}]")
        _expect(name not in seen, f"contract {name!r} ranked twice", f"{loc}[{i}]")
        seen.add(name)
        order.append(index[name])
    return tuple(order)


def _parse_agent_numbers(
    value: Any, market: _MarketContext, loc: str
) -> dict[str, int]:
    body = _expect_dict(value, loc)
    out = {}
    for template, raw in body.items():
        _expect(
            template in market.templates, f"unknown template {template!r}", loc
        )
        out[template] = _expect_int(raw, f"{loc}.{template}")
    return out


def _spec_to_json(spec: ChoiceFunction, local_names: Sequence[str]) -> dict:
    if isinstance(spec, Identity):
        return {"variant": "identity"}
    if isinstance(spec, TableChoice):
        return {
            "variant": "table",
            "map": [
                {
                    "in": _subset_to_json(m, local_names),
                    "out": _subset_to_json(spec.entries[m], local_names),
                }
                for m in range(1 << spec.n)
            ],
        }
    if isinstance(spec, ResponsiveQuota):
        return {
            "variant": "responsive_quota",
            "order": [local_names[i] for i in spec.order],
            "quota": spec.quota,
        }
    if isinstance(spec, TopOfOrder):
        return {
            "variant": "top_of_order",
            "order": [local_names[i] for i in spec.order],
        }
    if isinstance(spec, UnionOfOrders):
        return {
            "variant": "union_of_orders",
            "orders": [[local_names[i] for i in order] for order in spec.orders],
        }
    if isinstance(spec, ValuationArgmax):
        return {
            "variant": "valuation_argmax",
            "values": [
                {
                    "set": _subset_to_json(m, local_names),
                    "value": _fraction_to_json(spec.values[m]),
                }
                for m in range(1 << spec.n)
            ],
            "epsilon": _fraction_to_json(spec.scheme.epsilon),
            "prices": [_fraction_to_json(p) for p in spec.scheme.prices],
        }
    if isinstance(spec, LinearProducerChoice):
        return {"variant": "linear_producer", "costs": dict(spec.unit_costs)}
    if isinstance(spec, UnitDemandConsumerChoice):
        return {"variant": "unit_demand_consumer", "wtp": dict(spec.willingness)}
    raise ParseError(f"cannot serialize choice functions of type {type(spec).__name__}")


# ---------------------------------------------------------------------------
# Whole documents
# ---------------------------------------------------------------------------


def parse_document(doc: Any) -> LoadedFile:
    """Parse one decoded JSON document into an instance (plus market data)."""
    body = _expect_dict(doc, "")
    version = body.get("schema_version")
    _expect(
        version == SCHEMA_VERSION,
        f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})",
        "schema_version",
    )

    raw_contracts = _expect_list(body.get("contracts"), "contracts")
    _expect(bool(raw_contracts), "need at least one contract", "contracts")
    names: list[str] = []
    for i, raw in enumerate(raw_contracts):
        name = _expect_str(raw, f"contracts[{i}]")
        _expect(bool(name), "contract names must be non-empty", f"contracts[{i}]")
        _expect(name not in names, f"duplicate contract name {name!r}", f"contracts[{i}]")
        names.append(name)
    n = len(names)
    index = {name: i for i, name in enumerate(names)}

    # --- market section (parsed before choice blocks, which may need it) ---
    market_contracts: list[MarketContract] | None = None
    grid: tuple[int, ...] = ()
    templates: tuple[str, ...] = ()
    if "market" in body:
        market_body = _expect_dict(body["market"], "market")
        raw_grid = _expect_list(market_body.get("prices"), "market.prices")
        grid = tuple(
            _expect_int(v, f"market.prices[{i}]") for i, v in enumerate(raw_grid)
        )
        _expect(
            len(grid) > 0 and all(a < b for a, b in zip(grid, grid[1:])),
            "price grid must be non-empty and strictly increasing",
            "market.prices",
        )
        raw_templates = _expect_list(market_body.get("templates"), "market.templates")
        templates = tuple(
            _expect_str(t, f"market.templates[{i}]") for i, t in enumerate(raw_templates)
        )
        _expect(
            len(set(templates)) == len(templates) and all(templates),
            "template names must be unique and non-empty",
            "market.templates",
        )
        tuples = _expect_dict(market_body.get("tuples"), "market.tuples")
        market_contracts = [None] * n  # type: ignore[list-item]
        for cname, raw in tuples.items():
            loc = f"market.tuples.{cname}"
            _expect(cname in index, f"unknown contract name {cname!r}", loc)
            row = _expect_dict(raw, loc)
            template = _expect_str(row.get("template"), f"{loc}.template")
            _expect(template in templates, f"unknown template {template!r}", f"{loc}.template")
            price_value = _expect_int(row.get("price"), f"{loc}.price")
            _expect(
                price_value in grid,
                f"price {price_value} is not on the grid {list(grid)}",
                f"{loc}.price",
            )
            market_contracts[index[cname]] = MarketContract(
                producer=_expect_str(row.get("producer"), f"{loc}.producer"),
                consumer=_expect_str(row.get("consumer"), f"{loc}.consumer"),
                template=template,
                price=grid.index(price_value),
            )
        for cname, mc in zip(names, market_contracts):
            _expect(mc is not None, f"no market tuple for contract {cname!r}", "market.tuples")

    # --- explicit labels ---
    explicit_labels: list[tuple[str, str]] | None = None
    if "labels" in body:
        labels_body = _expect_dict(body["labels"], "labels")
        explicit_labels = [None] * n  # type: ignore[list-item]
        for cname, raw in labels_body.items():
            loc = f"labels.{cname}"
            _expect(cname in index, f"unknown contract name {cname!r}", loc)
            pair = _expect_list(raw, loc)
            _expect(len(pair) == 2, "label must be [side1 agent, side2 agent]", loc)
            explicit_labels[index[cname]] = (
                _expect_str(pair[0], f"{loc}[0]"),
                _expect_str(pair[1], f"{loc}[1]"),
            )
        for cname, lab in zip(names, explicit_labels):
            _expect(lab is not None, f"no label for contract {cname!r}", "labels")

    # --- choice blocks ---
    choice_body = _expect_dict(body.get("choice"), "choice")
    for key in choice_body:
        _expect(key in ("side1", "side2"), f"unexpected key {key!r}", f"choice.{key}")
    sides: list[ChoiceFunction] = []
    owners: list[list[str] | None] = []
    for side in (1, 2):
        loc = f"choice.side{side}"
        block = _expect_dict(choice_body.get(f"side{side}"), loc)
        if "agents" in block:
            f, owner = _parse_agents_block(
                block["agents"], names, index, loc, side, grid, templates, market_contracts
            )
            sides.append(f)
            owners.append(owner)
        elif "variant" in block:
            sides.append(_parse_spec(block, names, loc, side, None))
            owners.append(None)
        else:
            raise ParseError("choice block needs either 'variant' or 'agents'", loc)

    # --- reconcile ownership across labels, market, and agent blocks ---
    derived: list[list[str] | None] = [
        [mc.producer for mc in market_contracts] if market_contracts else None,
        [mc.consumer for mc in market_contracts] if market_contracts else None,
    ]
    final_owner: list[list[str] | None] = [None, None]
    for side in (1, 2):
        candidates = [
            ([lab[side - 1] for lab in explicit_labels] if explicit_labels else None, "labels"),
            (derived[side - 1], "market.tuples"),
            (owners[side - 1], f"choice.side{side}.agents"),
        ]
        present = [(src, where) for src, where in candidates if src is not None]
        for (first, where_a), (other, where_b) in zip(present, present[1:]):
            for cid in range(n):
                _expect(
                    first[cid] == other[cid],
                    f"contract {names[cid]!r} is owned by {first[cid]!r} per {where_a}"
                    f" but {other[cid]!r} per {where_b}",
                    where_b,
                )
        final_owner[side - 1] = present[0][0] if present else None

    labels = None
    if final_owner[0] is not None and final_owner[1] is not None:
        labels = tuple(
            ContractLabel(a, b) for a, b in zip(final_owner[0], final_owner[1])
        )

    instance = Instance(names=tuple(names), f1=sides[0], f2=sides[1], labels=labels)

    economy = None
    if market_contracts is not None:
        economy = MoneyEconomy(
            instance=instance,
            contracts=tuple(market_contracts),
            price_grid=grid,
            templates=templates,
        )

    meta = _expect_dict(body.get("meta"), "meta") if "meta" in body else {}
    return LoadedFile(instance=instance, economy=economy, meta=meta)


def _parse_agents_block(
    raw_agents: Any,
    names: Sequence[str],
    index: Mapping[str, int],
    loc: str,
    side: int,
    grid: tuple[int, ...],
    templates: tuple[str, ...],
    market_contracts: Sequence[MarketContract] | None,
) -> tuple[AggregateChoice, list[str]]:
    agents_body = _expect_dict(raw_agents, f"{loc}.agents")
    _expect(bool(agents_body), "need at least one agent", f"{loc}.agents")
    owner: list[str | None] = [None] * len(names)
    parts = []
    for agent in sorted(agents_body):
        aloc = f"{loc}.agents.{agent}"
        entry = _expect_dict(agents_body[agent], aloc)
        slice_mask = _parse_subset(entry.get("contracts"), index, f"{aloc}.contracts")
        _expect(slice_mask != 0, "agent owns no contracts", f"{aloc}.contracts")
        slice_ids = ids_of(slice_mask)
        for cid in slice_ids:
            _expect(
                owner[cid] is None,
                f"contract {names[cid]!r} owned by both {owner[cid]!r} and {agent!r}",
                f"{aloc}.contracts",
            )
            owner[cid] = agent
        local_names = [names[cid] for cid in slice_ids]
        market = None
        if market_contracts is not None:
            market = _MarketContext(
                grid, templates, tuple(market_contracts[cid] for cid in slice_ids)
            )
        spec = _parse_spec(entry.get("choice"), local_names, f"{aloc}.choice", side, market)
        parts.append(AggregatePart(agent, spec, slice_ids))
    missing = [names[cid] for cid, a in enumerate(owner) if a is None]
    _expect(
        not missing, f"contracts {missing} are owned by no agent", f"{loc}.agents"
    )
    return AggregateChoice(len(names), tuple(parts)), owner  # type: ignore[arg-type]


def to_document(
    instance: Instance,
    economy: MoneyEconomy | None = None,
    meta: Mapping[str, Any] | None = None,
) -> dict:
    """Serialize an instance (plus optional market data) to a JSON document."""
    names = instance.names
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "contracts": list(names),
    }
    if instance.labels is not None:
        doc["labels"] = {
            names[i]: [lab.side1, lab.side2] for i, lab in enumerate(instance.labels)
        }
    choice: dict[str, Any] = {}
    for side, f in (("side1", instance.f1), ("side2", instance.f2)):
        if isinstance(f, AggregateChoice):
            choice[side] = {
                "agents": {
                    part.agent: {
                        "contracts": [names[cid] for cid in part.contract_ids],
                        "choice": _spec_to_json(
                            part.spec, [names[cid] for cid in part.contract_ids]
                        ),
                    }
                    for part in f.parts
                }
            }
        else:
            choice[side] = _spec_to_json(f, names)
    doc["choice"] = choice
    if economy is not None:
        doc["market"] = {
            "prices": list(economy.price_grid),
            "templates": list(economy.templates),
            "tuples": {
                names[i]: {
                    "producer": c.producer,
                    "consumer": c.consumer,
                    "template": c.template,
                    "price": economy.price_grid[c.price],
                }
                for i, c in enumerate(economy.contracts)
            },
        }
    if meta:
        doc["meta"] = dict(meta)
    return doc


def dumps_document(doc: Mapping[str, Any]) -> str:
    """Canonical JSON rendering: sorted keys, two-space indent, newline end."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load(path: str | Path) -> LoadedFile:
    """Read and parse an instance file."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"not valid JSON: {e}", str(path)) from None
    return parse_document(doc)


def save(
    path: str | Path,
    instance: Instance,
    economy: MoneyEconomy | None = None,
    meta: Mapping[str, Any] | None = None,
) -> None:
    """Serialize to a file in canonical form."""
    Path(path).write_text(dumps_document(to_document(instance, economy, meta)))
