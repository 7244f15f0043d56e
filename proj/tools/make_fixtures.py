#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the aggregate comparison fixtures under tests/fixtures."""
import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"
T0 = 1459535879


def record(entity, target, target_type, ts, kind, props):
    return json.dumps({
        "entityId": entity, "entityType": "user",
        "targetEntityId": target, "targetEntityType": target_type,
        "ip": "10.0.0.1", "timestamp": ts, "type": kind, "properties": props,
    }, separators=(",", ":"))


def attention_totals():
    # 100 two-page sessions whose load gaps sum to 76008 s, and 4361
    # non-empty intervals (21805 s) of pinging data over 500 items.
    lines = []
    for s in range(100):
        gap = 761 if s < 8 else 760
        sid = f"s{s:03d}"
        start = T0 + s * 1000
        lines.append(record(f"u{s:03d}", f"item-{s % 500:05d}", "item", start,
                            "page_load", {"sessionId": sid}))
        lines.append(record(f"u{s:03d}", f"item-{(s + 1) % 500:05d}", "item",
                            start + gap, "page_load", {"sessionId": sid}))
    sizes = [3] * 1453 + [2]
    for i, n in enumerate(sizes):
        report = [[{"mousemove": 1}] for _ in range(n)]
        lines.append(record(f"u{i % 100:03d}", f"item-{i % 500:05d}", "item",
                            T0 + 15 * (i + 1), "engagement_report",
                            {"report": report}))
    return lines


def impression_counts():
    # 883 listing loads of 30 items (26490) against 706 visibility reports
    # of 25 items (17650).
    lines = []
    for i in range(883):
        listed = [str((i + k) % 600) for k in range(30)]
        lines.append(record(f"u{i % 300:03d}", f"listing-{i % 600}", "listing",
                            T0 + 20 * i, "page_load",
                            {"sessionId": f"l{i:05d}", "listedItems": listed}))
    for i in range(706):
        viewed = [str((i + k) % 600) for k in range(25)]
        lines.append(record(f"u{i % 300:03d}", f"listing-{i % 600}", "listing",
                            T0 + 20 * i + 15, "visible_impression_report",
                            {"viewedItems": viewed}))
    return lines


def main():
    for name, lines in (("attention_totals.ndjson", attention_totals()),
                        ("impression_counts.ndjson", impression_counts())):
        lines.sort(key=lambda l: json.loads(l)["timestamp"])
        (OUT / name).write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
