"""HTTP service walkthrough, exercised in-process.

The same app that `faqrank serve` runs is built here and driven with a test
client, so this demo needs no open port.

    python demos/05_http_service.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from faqrank import AppConfig, SearchEngine, create_app

DATA = Path(__file__).parent / "data"

config = AppConfig(corpus_path=str(DATA / "faq.jsonl"))
engine = SearchEngine.build(config)
client = TestClient(create_app(config, engine))

health = client.get("/health").json()
print("GET /health ->", json.dumps(health))

body = {"query": "renew parking permit", "top_k": 3}
response = client.post("/v1/search", json=body)
print(f"\nPOST /v1/search {json.dumps(body)} -> {response.status_code}")
for row in response.json()["results"]:
    print(f"  {row['group']:<12} fused={row['fused_score']:.3f}  "
          f"{row['faq_id']}  {row['question']}")

response = client.get("/v1/faq/faq-003")
print(f"\nGET /v1/faq/faq-003 -> {response.status_code}")
print(" ", response.json()["answer"])

# Malformed bodies get a 400 with a stable shape; unknown ids a 404.
print("\nerror handling:")
r = client.post("/v1/search", json={"top_k": 3})
print(f"  missing query  -> {r.status_code} {r.json()}")
r = client.get("/v1/faq/faq-999")
print(f"  unknown faq id -> {r.status_code} {r.json()}")

# To serve for real:  faqrank --corpus demos/data/faq.jsonl serve --port 8080
