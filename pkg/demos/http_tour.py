"""
Tour of the HTTP service
========================

Boots the API server on a local port with the mock stack behind it and
drives the documented endpoints with plain HTTP calls: create a flow,
add a seed question, generate personas, rate one, and export the flow.
"""
import threading
import time

import httpx
import uvicorn

from ideamap.service.app import create_app
from ideamap.service.config import Config
from ideamap.service.runtime import Runtime

runtime = Runtime(Config(rate_limit_rps=0.0))
server = uvicorn.Server(
    uvicorn.Config(create_app(runtime), host="127.0.0.1", port=8747, log_level="warning")
)
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.05)

api = httpx.Client(base_url="http://127.0.0.1:8747")
print("health:", api.get("/health").json())

flow_id = api.post("/flows").json()["flow_id"]
seed = api.post(
    f"/flows/{flow_id}/nodes",
    json={"kind": "RQ", "payload": {"question": "Does spaced repetition help clinical training?"}},
).json()
print("seed node:", seed["id"], seed["payload"]["question"])

# Generation is kind-aware: an RQ node yields three personas.
personas = api.post(f"/flows/{flow_id}/nodes/{seed['id']}/generate", json={}).json()
for node in personas:
    print("persona:", node["id"], node["payload"]["persona"]["persona_name"])

# RQ nodes take ratings on four fixed dimensions, 1..5 each.
rating = api.post(
    f"/flows/{flow_id}/nodes/{seed['id']}/ratings",
    json={"dimensions": {"relevance": 5, "creativity": 3, "feasibility": 4, "specificity": 4}},
).json()
print("rating stored:", rating["dimensions"])

# Trait edits go through PATCH and come back as logged edit events.
event = api.patch(
    f"/flows/{flow_id}/nodes/{personas[0]['id']}",
    json={"field_path": "persona.background_fields.Discipline", "value": "Learning Science"},
).json()
print("edit event:", event["field_path"], "->", event["new_value"])

snapshot = api.get(f"/flows/{flow_id}/export").text
print(f"export: {len(snapshot)} bytes of canonical JSON")

metrics = api.get(f"/flows/{flow_id}/metrics").json()
print("metrics:", metrics)

api.close()
server.should_exit = True
thread.join(timeout=5)
runtime.close()
