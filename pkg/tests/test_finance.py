import dataclasses
import datetime as dt
from importlib import resources

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riskminer.corpus import FinancialRecord, ReportType, load_financial_records
from riskminer.errors import ConfigError, NonPositiveBase, NonPositiveDenominator, UnmatchedCompany
from riskminer.finance import (
    RESULT_COLUMNS,
    ScreenConfig,
    debt_ratio,
    format_percent,
    liquidity_ratio,
    match_periods,
    results_csv,
    results_table,
    screen,
    trend_report,
    yoy_change,
)

positive = st.floats(1e-3, 1e6, allow_nan=False)


def table1():
    return load_financial_records(str(resources.files("riskminer") / "data" / "table1.csv"))


def record(company, assets, profit, liq=1.6, debt=0.5):
    return FinancialRecord(company, ReportType.ANNUAL, dt.date(2023, 3, 31), assets, profit, liq, debt)


class TestRatios:
    def test_company_a(self):
        assert liquidity_ratio(150, 100) == 1.5
        assert debt_ratio(300, 500) == 0.6

    def test_identities_and_errors(self):
        assert liquidity_ratio(7.5, 7.5) == 1.0
        assert debt_ratio(0, 400) == 0.0
        with pytest.raises(NonPositiveDenominator):
            liquidity_ratio(1, 0)
        with pytest.raises(NonPositiveDenominator):
            debt_ratio(1, 0)

    @settings(max_examples=100, deadline=None)
    @given(positive, positive, st.floats(1e-3, 1e3))
    def test_homogeneous(self, a, b, c):
        assert liquidity_ratio(c * a, c * b) == pytest.approx(liquidity_ratio(a, b), rel=1e-12)
        assert debt_ratio(c * a, c * b) == pytest.approx(debt_ratio(a, b), rel=1e-12)


class TestYoy:
    def test_table2_company_a(self):
        assert yoy_change(55, 50) == 10.0
        assert format_percent(yoy_change(55, 50)) == "+10%"
        assert format_percent(yoy_change(525, 500)) == "+5%"

    def test_identity_and_errors(self):
        assert yoy_change(42, 42) == 0.0
        assert format_percent(0.0) == "0%"
        assert format_percent(-2.5) == "-2.5%"
        with pytest.raises(NonPositiveBase):
            yoy_change(5, 0)

    @settings(max_examples=100, deadline=None)
    @given(positive, st.floats(-0.99, 5.0))
    def test_growth_identity(self, x, r):
        assert yoy_change((1 + r) * x, x) == pytest.approx(100 * r, rel=1e-9, abs=1e-9)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(1.0, 1e3), st.floats(1.0, 1e3))
    def test_reciprocal(self, a, b):
        y1, y2 = yoy_change(a, b), yoy_change(b, a)
        assert (1 + y1 / 100) * (1 + y2 / 100) == pytest.approx(1.0, rel=1e-9)


class TestScreen:
    def test_table1_defaults(self):
        reports = screen(table1())
        liq = {r.company[-1] for r in reports if r.flag("liquidity")}
        debt = {r.company[-1] for r in reports if r.flag("debt")}
        # every record at or below 1.5 / at or above 0.7, boundary values included
        assert liq == set("ABDGHJ")
        assert debt == set("BHJ")
        assert [r.company for r in reports] == sorted(r.company for r in reports)

    def test_extreme_thresholds(self):
        assert not any(r.flag("liquidity") for r in screen(table1(), ScreenConfig(liquidity_floor=0)))
        assert all(r.flag("debt") for r in screen(table1(), ScreenConfig(debt_ceiling=0)))

    def test_negative_threshold_rejected(self):
        with pytest.raises(ConfigError):
            ScreenConfig(liquidity_floor=-1)

    def test_flag_records_threshold(self):
        flag = screen(table1(), ScreenConfig(1.4, 0.65))[0].flags[0]
        assert (flag.rule, flag.threshold, flag.comparison) == ("liquidity", 1.4, "<=")

    @settings(max_examples=30, deadline=None)
    @given(st.permutations(list(range(10))))
    def test_order_independent(self, perm):
        records = table1()
        assert screen([records[i] for i in perm]) == screen(records)


class TestTrends:
    def test_company_a(self):
        (t,) = trend_report([(record("Company A", 500, 50), record("Company A", 525, 55))])
        assert format_percent(t.net_profit_yoy) == "+10%"
        assert format_percent(t.asset_growth) == "+5%"

    def test_identical_periods(self):
        (t,) = trend_report([(record("X", 10, 2), record("X", 10, 2))])
        assert (t.net_profit_yoy, t.asset_growth) == (0.0, 0.0)

    def test_unmatched(self):
        with pytest.raises(UnmatchedCompany):
            trend_report([(None, record("X", 10, 2))])
        with pytest.raises(UnmatchedCompany):
            trend_report([(record("Y", 10, 2), record("X", 10, 2))])
        with pytest.raises(UnmatchedCompany):
            match_periods([record("A", 1, 1)], [record("A", 1, 1), record("B", 1, 1)])
        with pytest.raises(UnmatchedCompany):
            match_periods([record("A", 1, 1), record("B", 1, 1)], [record("A", 1, 1)])

    def test_match_periods(self):
        prev = [record("B", 10, 1), record("A", 20, 2)]
        cur = [record("A", 22, 3), record("B", 11, 1)]
        reports = trend_report(match_periods(prev, cur))
        assert [(t.company, t.asset_growth) for t in reports] == [("A", 10.0), ("B", 10.0)]


class TestOutput:
    def test_csv_columns_and_row(self):
        current = table1()
        previous = [dataclasses.replace(r, total_assets=r.total_assets / 1.05,
                                        net_profit=r.net_profit / 1.1) for r in current]
        text = results_csv(screen(current), trend_report(match_periods(previous, current)),
                           {"Company A": "market risk"})
        lines = text.splitlines()
        assert lines[0] == ",".join(RESULT_COLUMNS)
        assert lines[1] == "Company A,market risk,1.5,0.6,+10%,+5%,yes,no"

    def test_table_footer(self):
        text = results_table(screen(table1()), config=ScreenConfig())
        assert text.splitlines()[0].startswith("Company")
        assert text.rstrip().endswith("flags: liquidity ratio <= 1.5, debt ratio >= 0.7")
