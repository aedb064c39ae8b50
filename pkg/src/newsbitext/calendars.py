"""Solar-hijri and Kurdish calendar arithmetic.

Conversions use the 33-year arithmetic leap cycle (integer algorithm, no
astronomical tables): within each cycle 8 years are leap, and a year ``y``
is leap exactly when ``(y + 1595) % 33`` is a multiple of 4 other than 32.
This agrees with the observed Iranian calendar on all days from 1990 to
2030, which is the range this toolkit cares about.

The Kurdish calendar is month-aligned with solar-hijri and runs 1321 years
ahead (Kurdish 2720 == solar-hijri 1399).
"""

from __future__ import annotations

import datetime as _dt

KURDISH_YEAR_OFFSET = 1321

_GREGORIAN_CUMULATIVE_DAYS = (0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334)


def is_solar_hijri_leap(year: int) -> bool:
    r = (year + 1595) % 33
    return r % 4 == 0 and r != 32


def solar_hijri_month_length(year: int, month: int) -> int:
    if not 1 <= month <= 12:
        raise ValueError(f"month out of range: {month}")
    if month <= 6:
        return 31
    if month <= 11:
        return 30
    return 30 if is_solar_hijri_leap(year) else 29


def _check_solar_hijri(year: int, month: int, day: int) -> None:
    if not 1 <= day <= solar_hijri_month_length(year, month):
        raise ValueError(f"invalid solar-hijri date: {year:04d}-{month:02d}-{day:02d}")


def gregorian_to_solar_hijri(gy: int, gm: int, gd: int) -> tuple[int, int, int]:
    """Convert a Gregorian date to a (year, month, day) solar-hijri triple."""
    _dt.date(gy, gm, gd)  # validates
    gy2 = gy + 1 if gm > 2 else gy
    days = (
        355666
        + 365 * gy
        + (gy2 + 3) // 4
        - (gy2 + 99) // 100
        + (gy2 + 399) // 400
        + gd
        + _GREGORIAN_CUMULATIVE_DAYS[gm - 1]
    )
    jy = -1595 + 33 * (days // 12053)
    days %= 12053
    jy += 4 * (days // 1461)
    days %= 1461
    if days > 365:
        jy += (days - 1) // 365
        days = (days - 1) % 365
    if days < 186:
        jm = 1 + days // 31
        jd = 1 + days % 31
    else:
        jm = 7 + (days - 186) // 30
        jd = 1 + (days - 186) % 30
    return jy, jm, jd


def solar_hijri_to_gregorian(jy: int, jm: int, jd: int) -> tuple[int, int, int]:
    """Convert a solar-hijri date to a (year, month, day) Gregorian triple."""
    _check_solar_hijri(jy, jm, jd)
    jy += 1595
    days = (
        -355668
        + 365 * jy
        + (jy // 33) * 8
        + ((jy % 33) + 3) // 4
        + jd
        + ((jm - 1) * 31 if jm < 7 else (jm - 7) * 30 + 186)
    )
    gy = 400 * (days // 146097)
    days %= 146097
    if days > 36524:
        days -= 1
        gy += 100 * (days // 36524)
        days %= 36524
        if days >= 365:
            days += 1
    gy += 4 * (days // 1461)
    days %= 1461
    if days > 365:
        gy += (days - 1) // 365
        days = (days - 1) % 365
    gd = days + 1
    leap = gy % 4 == 0 and (gy % 100 != 0 or gy % 400 == 0)
    month_lengths = (31, 29 if leap else 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)
    gm = 1
    for length in month_lengths:
        if gd <= length:
            break
        gd -= length
        gm += 1
    return gy, gm, gd


def kurdish_to_solar_hijri(ky: int, km: int, kd: int) -> tuple[int, int, int]:
    return ky - KURDISH_YEAR_OFFSET, km, kd


def solar_hijri_to_kurdish(jy: int, jm: int, jd: int) -> tuple[int, int, int]:
    return jy + KURDISH_YEAR_OFFSET, jm, jd


def kurdish_to_gregorian(ky: int, km: int, kd: int) -> tuple[int, int, int]:
    return solar_hijri_to_gregorian(ky - KURDISH_YEAR_OFFSET, km, kd)


def gregorian_to_kurdish(gy: int, gm: int, gd: int) -> tuple[int, int, int]:
    jy, jm, jd = gregorian_to_solar_hijri(gy, gm, gd)
    return jy + KURDISH_YEAR_OFFSET, jm, jd
