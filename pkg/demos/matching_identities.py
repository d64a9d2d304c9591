# # Checking the matching identities
#
# Each check compares two exact rational q-series term by term.  A failed
# row would be printed with MISMATCH and the verdict would be False.

from quatlat.identities import verify_cor12, verify_thm11, verify_thm13


def show(report, rows=6):
    print(f"{report.name} {report.parameters} mode={report.mode}")
    for r in report.rows[:rows]:
        print(f"   m={r.m:2}  {str(r.lhs):>8}  {str(r.rhs):>8}  {'ok' if r.equal else 'MISMATCH'}")
    print("   verdict:", report.verdict)


# Two definite algebras of discriminants 2 and 3, levels 1, 2 and 3.
show(verify_thm11(1, 2, 3, 1, 30))

# Discriminant 30 is definite (three primes); 6 is not.  The left side is a
# genus average, the right side reduces the indefinite data at 6 once more.
show(verify_thm13(6, 5, 1, 20))

# Degrees of Heegner divisors on the curves of discriminant 6 and 10.
show(verify_cor12(2, 3, 5, 1, 20))
