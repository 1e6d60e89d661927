# Copyright 2026 The eloevo Authors. Licensed under the Apache License 2.0.
# Stub mutator: create copies the parent with +0.02 accuracy; refine adds
# 0.01 and leaves a refined.txt marker in the session.
import json, os, sys
session, phase = sys.argv[1], sys.argv[2]
info = json.load(open(os.path.join(session, "session.json")))
src = os.path.join(session, "competitors", info["parent_id"]) if phase == "create" else os.path.join(session, "artifact")
acc = json.load(open(os.path.join(src, "agent.json")))["accuracy"] + (0.02 if phase == "create" else 0.01)
os.makedirs(os.path.join(session, "artifact"), exist_ok=True)
json.dump({"accuracy": round(min(acc, 1.0), 6)}, open(os.path.join(session, "artifact", "agent.json"), "w"))
open(os.path.join(session, "reasoning.md" if phase == "create" else "refined.txt"), "w").write(phase + "\n")
