"""
Running a sweep from a config file
==================================

The same thing as ``mimo-lab sweep sweep.cfg -o sweep.csv`` on the
command line.
"""

import pathlib
import tempfile

from mimo_lab.cli import main, parse_config, run_sweep, format_csv

cfg = pathlib.Path(__file__).with_name("sweep.cfg")
spec = parse_config(cfg.read_text())
print(f"{len(list(spec.scenarios()))} scenarios along {spec.axis}")

# %%
# In-process, straight to CSV text.
print(format_csv(run_sweep(spec).rows))

# %%
# Through the entry point, written atomically to a file.
with tempfile.TemporaryDirectory() as tmp:
    out = pathlib.Path(tmp) / "sweep.csv"
    main(["sweep", str(cfg), "-o", str(out)])
    print(out.read_text().splitlines()[0])

# %%
# Rule-of-thumb lookup.
main(["rot", "--precoder", "mf", "--K", "10", "--snr-t-db", "10", "--sigma-a-db", "1", "--sigma-phi-deg", "20"])
