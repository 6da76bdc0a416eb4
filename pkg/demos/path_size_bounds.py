"""Compare the worst-case verification path size with its closed-form bounds."""

from quotesig.bounds import bound_contiguous, oracle_all

# every t-subset of a 16-token message, exhaustively; witness ranges are half-open (0..1 is token 0)
print(" t  observed  bound  witness")
for r in oracle_all(16):
    print(f"{r.t:2}  {r.observed_max:8}  {r.bound:5}  {r.witness.format()}")

# contiguous quotes stay logarithmic
for n in (8, 100, 256):
    worst = max(r.observed_max for r in oracle_all(n, contiguous_only=True))
    print(f"n={n:3}: worst contiguous path {worst}, bound {bound_contiguous(n)}")
