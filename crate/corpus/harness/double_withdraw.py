#!/usr/bin/env python3
"""Behavioral test for bank.sol: withdraw twice, check total paid out.

Interprets the statements of withdraw() naively (read balance, pay, zero
the balance) so that reordering or deleting a statement changes the total.
Starting balance is 100; a correct contract pays out exactly 100 across
two withdrawals.
"""

import os
import re
import sys


def statements_of_withdraw(src):
    m = re.search(r"function withdraw\(\)[^{]*\{", src)
    if not m:
        print("no withdraw function")
        return None
    depth, i = 1, m.end()
    start = i
    while i < len(src) and depth:
        if src[i] == "{":
            depth += 1
        elif src[i] == "}":
            depth -= 1
        i += 1
    body = src[start : i - 1]
    return [s.strip() for s in body.split(";") if s.strip()]


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    with open(os.path.join(here, "bank.sol")) as f:
        src = f.read()
    stmts = statements_of_withdraw(src)
    if stmts is None:
        return 2

    balances = {"caller": 100}
    paid = 0
    for _ in range(2):
        amount = 0
        for st in stmts:
            if re.match(r"uint\d*\s+amount\s*=\s*balances", st):
                amount = balances["caller"]
            elif re.search(r"\.(send|transfer)\(amount\)|call\.value\(amount\)", st):
                paid += amount
            elif re.match(r"balances\[msg\.sender\]\s*=\s*0", st):
                balances["caller"] = 0

    if paid != 100:
        print("FAIL paid=%d" % paid)
        return 1
    print("OK paid=100")
    return 0


if __name__ == "__main__":
    sys.exit(main())
