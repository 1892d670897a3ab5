"""Integer micro-unit coin arithmetic.

All amounts are exact non-negative integers. One whole token is 1,000,000
micro-units (so 10,000 Lunc is 10_000_000_000 uluna). A coin set is a plain
``{denom: amount}`` dict holding no zero and no negative entries; the empty
dict is the canonical zero. Keeping the representation this small lets the
rest of the engine copy and hash state cheaply.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InsufficientFunds, ParseError

MICRO = 1_000_000

CoinSet = dict


@dataclass(frozen=True)
class Coin:
    """A single (denomination, amount) pair.

    Amounts are micro-units and must be non-negative; arbitrary magnitudes
    are fine since Python ints do not overflow.
    """

    denom: str
    amount: int

    def __post_init__(self):
        if not self.denom or not isinstance(self.denom, str):
            raise ValueError("coin denom must be a non-empty string")
        if not isinstance(self.amount, int) or isinstance(self.amount, bool):
            raise ValueError("coin amount must be an int")
        if self.amount < 0:
            raise ValueError("coin amount must be non-negative")


def coin_set(*coins: Coin) -> dict:
    """Build a normalized coin set from Coin values, merging duplicates."""
    out: dict = {}
    for c in coins:
        out[c.denom] = out.get(c.denom, 0) + c.amount
    return normalize(out)


def normalize(cs: dict) -> dict:
    """Drop zero entries; negative entries are a programming error."""
    for denom, amt in cs.items():
        if amt < 0:
            raise ValueError(f"negative amount for {denom}")
    return {d: a for d, a in cs.items() if a != 0}


def coins_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for d, amt in b.items():
        out[d] = out.get(d, 0) + amt
    return normalize(out)


def coins_sub(a: dict, b: dict) -> dict:
    """a - b, raising InsufficientFunds if any denom would go negative."""
    out = dict(a)
    for d, amt in b.items():
        have = out.get(d, 0)
        if have < amt:
            raise InsufficientFunds(f"need {amt} {d}, have {have}")
        out[d] = have - amt
    return {d: a2 for d, a2 in out.items() if a2 != 0}


def coins_ge(a: dict, b: dict) -> bool:
    """True when a covers b in every denomination."""
    return all(a.get(d, 0) >= amt for d, amt in b.items())


def is_zero(cs: dict) -> bool:
    return not normalize(dict(cs))


def coins_from_config(entries) -> dict:
    """Parse ``[{"denom": ..., "amount": ...}, ...]`` (amounts int or str)."""
    out: dict = {}
    try:
        for e in entries:
            out[e["denom"]] = out.get(e["denom"], 0) + int(e["amount"])
        return normalize(out)
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"bad coin list entry: {exc}") from exc


def coins_as_strings(cs: dict) -> dict:
    """Render amounts as decimal strings, used by reports and hashing."""
    return {d: str(cs[d]) for d in sorted(cs)}
