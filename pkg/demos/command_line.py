# %% [markdown]
# # Command line usage
#
# The same checks are reachable through ``ndkp``.  This script drives the
# entry point in-process on the bundled one-soliton config.

# %%
import json
import os
import tempfile

from ndkp.cli import main

here = os.path.dirname(os.path.abspath(__file__))
config = os.path.join(here, "..", "configs", "e1.json")
tmp = tempfile.mkdtemp()

# %%
report = os.path.join(tmp, "report.json")
code = main(["verify", "--config", config, "--out", report])
doc = json.load(open(report))
print("exit code", code, "passed", doc["passed"])

# %%
csv_path = os.path.join(tmp, "tau.csv")
main(["fields", "--config", config, "--field", "Tau", "--out", csv_path])
print(open(csv_path).read().splitlines()[:4])

# %%
main(["oracle", "--config", config])
