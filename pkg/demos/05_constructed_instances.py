"""Random column- and row-shaped presentations checked against the saturation oracle.

Each instance satisfies G_s but not G_{s+1} and has rank one modulo
(x1..xs).  ``verify`` compares the matrix formula for the defining ideal
with the saturation, and checks height, analytic spread, the residual
intersection and the fiber-type prediction.
"""

from reesalg.cli import Options, make_instance_job, run_job
from reesalg.rees import approximation_chain, column_instance
from reesalg.polyring import PrimeField

for kind, params in [("column", (4, 2, 5, 1)), ("row", (4, 2, 6, 1)), ("row", (4, 3, 5, 1))]:
    job = make_instance_job(kind, *params, seed=1)
    report, code = run_job(job, mode="verify", opts=Options(depth=0))
    print(f"{job.name}: exit {code}")
    print("   formula:", report["candidate"]["formula"])
    print("   census:", report["fiber"]["census"], " analytic spread:", report["fiber"]["analytic_spread"])
    print("   fiber type:", report["fiber_type"])
    failed = [k for k, v in report["assertions"].items() if not v]
    print("   failed assertions:", failed or "none")

p, _ = column_instance(4, 2, 5, 1, seed=1, field=PrimeField(32003))
chain = approximation_chain(p, 3, s=2)
print("\nsuccessive approximations (drop the last i columns):")
for st in chain.steps:
    print(f"   i = {st.i}: ht J_i = {st.height_J_i}")
print("heights drop by one and both chains are nested:", chain.passed)
