import pytest

from lowdefault.data_io import (
    CSV_HEADER,
    builtin_dataset,
    builtin_names,
    parse_csv,
    serialize_csv,
)
from lowdefault.errors import ParseError, UnknownDatasetError, ValidationError

TABLE3_CSV = """year,pool_size,defaults
2003,125,0
2004,125,0
2005,125,0
2006,125,0
2007,125,0
2008,125,0
2009,125,0
2010,125,1
"""


class TestParse:
    def test_table3_shape(self):
        series = parse_csv(TABLE3_CSV)
        assert series.T == 8
        assert series.obligor_years == 1000
        assert series.total_defaults == 1

    def test_round_trip(self):
        series = parse_csv(TABLE3_CSV)
        assert parse_csv(serialize_csv(series)) == series
        moodys = builtin_dataset("moodys_investment_grade").series
        assert parse_csv(serialize_csv(moodys)) == moodys

    def test_rejects_defaults_equal_pool(self):
        with pytest.raises(ValidationError):
            parse_csv("year,pool_size,defaults\n2000,5,5\n")

    def test_rejects_negative_defaults(self):
        with pytest.raises(ValidationError):
            parse_csv("year,pool_size,defaults\n2000,5,-1\n")

    def test_rejects_gap_years(self):
        with pytest.raises(ValidationError):
            parse_csv("year,pool_size,defaults\n2000,5,0\n2002,5,0\n")

    def test_rejects_duplicate_years(self):
        with pytest.raises(ValidationError):
            parse_csv("year,pool_size,defaults\n2000,5,0\n2000,5,0\n")

    def test_rejects_extra_columns(self):
        with pytest.raises(ParseError):
            parse_csv("year,pool_size,defaults,region\n2000,5,0,EU\n")

    def test_parse_error_carries_line_number(self):
        with pytest.raises(ParseError) as err:
            parse_csv("year,pool_size,defaults\n2000,5,0\n2001,x,0\n")
        assert err.value.line == 3
        assert "line 3" in str(err.value)

    def test_rejects_wrong_header(self):
        with pytest.raises(ParseError):
            parse_csv("annum,pool,def\n2000,5,0\n")

    def test_rejects_empty(self):
        with pytest.raises(ParseError):
            parse_csv("")
        with pytest.raises(ParseError):
            parse_csv(CSV_HEADER + "\n")

    def test_tolerates_blank_lines_and_bom(self):
        series = parse_csv("﻿year,pool_size,defaults\n\n2000,5,0\n\n2001,6,1\n")
        assert series.T == 2


class TestBuiltins:
    def test_names(self):
        assert set(builtin_names()) == {"fictitious", "moodys_investment_grade"}

    def test_fictitious_matches_source_table(self):
        series = builtin_dataset("fictitious").series
        assert series.rows[-1] == (2010, 125, 1)
        assert all(k == 0 for _, _, k in series.rows[:-1])
        assert series.obligor_years == 1000 and series.total_defaults == 1

    def test_moodys_matches_source_table(self):
        series = builtin_dataset("moodys_investment_grade").series
        assert series.T == 21
        rows = dict((y, (n, k)) for y, n, k in series.rows)
        assert rows[2002] == (3128, 14)
        assert rows[2008] == (3133, 14)
        assert rows[1991] == (1543, 1)
        assert rows[2009] == (3048, 11)
        assert series.obligor_years == 53630
        assert series.total_defaults == 54

    def test_unknown_dataset(self):
        with pytest.raises(UnknownDatasetError):
            builtin_dataset("unknown")
