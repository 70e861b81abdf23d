"""
Ratio screening and period-over-period trends
=============================================

Liquidity and debt flags for ten sample companies, and year-over-year
changes computed from a constructed prior period.
"""

import dataclasses
from importlib import resources

from riskminer.corpus import load_financial_records
from riskminer.finance import ScreenConfig, match_periods, results_table, screen, trend_report

path = resources.files("riskminer") / "data" / "table1.csv"
current = load_financial_records(str(path))

# flags are non-strict: a ratio sitting exactly on the threshold is flagged
config = ScreenConfig(liquidity_floor=1.5, debt_ceiling=0.7)
reports = screen(current, config)

# a prior period with 10% lower profit and 5% lower assets for every company
previous = [dataclasses.replace(r, net_profit=r.net_profit / 1.1, total_assets=r.total_assets / 1.05)
            for r in current]
trends = trend_report(match_periods(previous, current))

themes = {"Company A": "market risk", "Company B": "credit risk", "Company H": "cash flow"}
print(results_table(reports, trends, themes, config))

# a stricter floor flags fewer companies
strict = screen(current, ScreenConfig(liquidity_floor=1.4))
print("flagged at 1.4:", [r.company for r in strict if r.flag("liquidity")])
