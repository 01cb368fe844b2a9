# %% [markdown]
# # The summary table and certificate files
#
# The report runs seeded constructions for each property and lists the
# minimal number of outcomes. The same table is printed by
# `corrwit report --dim 2 --trials 100`.

# %%
import tempfile
from pathlib import Path

from corrwit import fileio, report, states, witness

rep = report.run_report(d=2, trials=20, seed=0)
print(report.format_report(rep))

# %% [markdown]
# Matrices are written as JSON with separate real and imaginary parts and 17
# significant digits, so reading and writing again gives the same bytes.

# %%
cert = witness.build_entangling_perturbation(states.random_direction(2, seed=5))
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "kappa.json"
    fileio.write_matrix_file(path, cert.kappa.op, "state", 2)
    kind, d, back = fileio.read_matrix_file(path)
    again = Path(tmp) / "again.json"
    fileio.write_matrix_file(again, back, kind, d)
    print(path.read_text()[:200], "...")
    print("byte identical:", path.read_bytes() == again.read_bytes())
