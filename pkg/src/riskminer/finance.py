"""Financial ratios, period-over-period trends and threshold risk screening."""

import csv
import io
from dataclasses import dataclass, field

from .errors import ConfigError, NonPositiveBase, NonPositiveDenominator, UnmatchedCompany


def liquidity_ratio(current_assets, current_liabilities):
    if not current_liabilities > 0:
        raise NonPositiveDenominator(f"current liabilities must be > 0, got {current_liabilities}")
    return current_assets / current_liabilities


def debt_ratio(total_liabilities, total_assets):
    if not total_assets > 0:
        raise NonPositiveDenominator(f"total assets must be > 0, got {total_assets}")
    return total_liabilities / total_assets


def yoy_change(current, previous):
    """Percent change of ``current`` over ``previous``."""
    if not previous > 0:
        raise NonPositiveBase(f"previous-period value must be > 0, got {previous}")
    # scale before dividing: (55 - 50) * 100 / 50 is exactly 10.0
    return (current - previous) * 100.0 / previous


def format_percent(value):
    """``+10%``, ``-2.5%``, ``0%``."""
    text = f"{value:+.2f}".rstrip("0").rstrip(".")
    return ("0" if text in ("+0", "-0") else text) + "%"


# --- screening -------------------------------------------------------------

@dataclass(frozen=True)
class ScreenConfig:
    liquidity_floor: float = 1.5
    debt_ceiling: float = 0.7

    def __post_init__(self):
        if self.liquidity_floor < 0 or self.debt_ceiling < 0:
            raise ConfigError("screen thresholds must be non-negative")


@dataclass(frozen=True)
class Flag:
    rule: str           # "liquidity" or "debt"
    triggered: bool
    threshold: float
    comparison: str     # "<=" or ">="


@dataclass(frozen=True)
class RatioReport:
    company: str
    liquidity_ratio: float
    debt_ratio: float
    flags: tuple = field(default=())

    def flag(self, rule):
        for f in self.flags:
            if f.rule == rule:
                return f.triggered
        raise KeyError(rule)

    @property
    def triggered(self):
        return [f.rule for f in self.flags if f.triggered]


def screen(records, config=None):
    """One report per record, sorted by company.

    Both comparisons are non-strict, so a company sitting exactly on a
    threshold is flagged.
    """
    config = config or ScreenConfig()
    reports = []
    for r in records:
        flags = (
            Flag("liquidity", r.liquidity_ratio <= config.liquidity_floor, config.liquidity_floor, "<="),
            Flag("debt", r.debt_ratio >= config.debt_ceiling, config.debt_ceiling, ">="),
        )
        reports.append(RatioReport(r.company, r.liquidity_ratio, r.debt_ratio, flags))
    return sorted(reports, key=lambda rep: rep.company)


# --- trends ----------------------------------------------------------------

@dataclass(frozen=True)
class TrendReport:
    company: str
    net_profit_yoy: float
    asset_growth: float


def match_periods(previous, current):
    """Pair two record lists by company (each company once per list)."""
    prev = {r.company: r for r in previous}
    pairs = []
    for r in current:
        if r.company not in prev:
            raise UnmatchedCompany(f"no previous-period record for {r.company!r}")
        pairs.append((prev.pop(r.company), r))
    if prev:
        raise UnmatchedCompany("no current-period record for " + ", ".join(sorted(prev)))
    return pairs


def trend_report(pairs):
    """``pairs`` are ``(previous, current)`` records of the same company."""
    out = []
    for prev, cur in pairs:
        if prev is None or cur is None or prev.company != cur.company:
            name = (cur or prev).company if (cur or prev) else "?"
            raise UnmatchedCompany(f"period pair for {name!r} is not matched by company")
        out.append(TrendReport(
            company=cur.company,
            net_profit_yoy=yoy_change(cur.net_profit, prev.net_profit),
            asset_growth=yoy_change(cur.total_assets, prev.total_assets),
        ))
    return sorted(out, key=lambda t: t.company)


# --- output ----------------------------------------------------------------

RESULT_COLUMNS = ("Company", "Main Risk Theme", "Liquidity Ratio", "Debt Ratio",
                  "Net Profit Change (YoY)", "Asset Growth Rate", "Liquidity Flag", "Debt Flag")


def result_rows(reports, trends=None, themes=None):
    """Rows in the column order of ``RESULT_COLUMNS``; missing data is blank."""
    trends = {t.company: t for t in (trends or [])}
    themes = themes or {}
    rows = []
    for rep in reports:
        t = trends.get(rep.company)
        rows.append([
            rep.company,
            themes.get(rep.company, ""),
            repr(rep.liquidity_ratio),
            repr(rep.debt_ratio),
            format_percent(t.net_profit_yoy) if t else "",
            format_percent(t.asset_growth) if t else "",
            "yes" if rep.flag("liquidity") else "no",
            "yes" if rep.flag("debt") else "no",
        ])
    return rows


def results_csv(reports, trends=None, themes=None):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    writer.writerows(result_rows(reports, trends, themes))
    return buf.getvalue()


def results_table(reports, trends=None, themes=None, config=None):
    rows = [list(RESULT_COLUMNS)] + result_rows(reports, trends, themes)
    widths = [max(len(r[i]) for r in rows) for i in range(len(RESULT_COLUMNS))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    if config is not None:
        lines.append("")
        lines.append(f"flags: liquidity ratio <= {config.liquidity_floor!r}, "
                     f"debt ratio >= {config.debt_ceiling!r}")
    return "\n".join(lines) + "\n"
