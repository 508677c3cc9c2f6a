"""Driving the command-line interface.

Documents are JSON; rationals travel as fraction strings and Novikov terms as
"q*T^(l)*e^(m)".  Commands read a document from --in (default stdin) and
write deterministic reports, so they chain through pipes.
"""

import json
import subprocess
import sys


def run(args, stdin_text=None):
    proc = subprocess.run([sys.executable, "-m", "ainfkit.cli"] + args,
                          input=stdin_text, capture_output=True, text=True)
    print(f"$ ainfkit {' '.join(args)}")
    sys.stdout.write(proc.stdout)
    print(f"(exit {proc.returncode})\n")
    return proc


# a presentation document from the preset, piped into the criteria command
preset = run(["preset-whitney", "--n", "3"])
run(["bc-criteria", "--in", "-"], preset.stdout)

# a hand-written system document: the curvature fixture
doc = {
    "kind": "system", "flavor": "nov0", "cutoff": "3",
    "monoid": [["1", 0]],
    "basis": [["x", 0], ["y", 1]],
    "role": "algebra",
    "tables": [
        {"k": 1, "lam": "0", "mu": 0, "role": "algebra",
         "entries": [{"inputs": ["x"], "output": "y", "coeff": "1"}]},
        {"k": 0, "lam": "1", "mu": 0, "role": "algebra",
         "entries": [{"inputs": [], "output": "y", "coeff": "1"}]},
    ],
    "elements": {"b": {"x": ["-1*T^(1)*e^(0)"]}},
}
text = json.dumps(doc)
run(["check", "--level", "3"], text)
run(["mc-solve"], text)
run(["mc-residual", "--element", "b"], text)

# pure-argument commands
run(["trees", "--k", "4", "--mode", "strict"])
run(["signs", "--kind", "zeta2", "--n", "2", "--i", "1", "--k1", "1", "--k2", "2"])
run(["index", "--kind", "eta", "--n", "3",
     "--r-minus=-1/4,-1/4,-1/4", "--r-plus=5/4,1/4,1/4"])
run(["vdim", "--kind", "main", "--params", '{"maslov": 2, "k": 3, "n": 4}'])
run(["feasible", "--dims", '{"-2": 1, "-1": 1, "2": 1, "3": 1}'])
