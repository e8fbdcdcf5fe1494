"""
The command line
================

Every step above is also reachable from ``qpkc``. Files are JSON and the
same seed gives the same bytes.
"""

# %%
import tempfile
from pathlib import Path

from qpkc.cli import main
from qpkc.qsim import PureState
from qpkc.serialize import state_to_json, write_json

work = Path(tempfile.mkdtemp())
main(["keygen", "--scheme", "rsa", "--p", "3", "--q", "5", "--e", "3", "--out", str(work / "key.json")])
write_json(work / "msg.json", state_to_json(PureState.from_register("m", 4, {2: 1, 7: 1}, normalize=True)))
main(["encrypt", "--key", str(work / "key.json"), "--in", str(work / "msg.json"), "--r", "6", "--out", str(work / "c.json")])
main(["decrypt", "--key", str(work / "key.json"), "--in", str(work / "c.json"), "--compare", str(work / "msg.json"),
      "--out", str(work / "back.json")])

# %%
main(["sign-demo", "--scheme", "mceliece", "--tamper", "tag-bit:3", "--out", str(work / "t.json")])
main(["replay", "--in", str(work / "t.json")])

# %%
main(["verify", "--seed", "42", "--trials", "5"])
