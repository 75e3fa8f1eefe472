"""
Personas profiled from first authors
====================================

The alternative persona source: take retrieved papers, pick the most
cited first authors, keep each author's papers that sit close to the
collection centroid (cosine at least 0.65, top three), condense them,
and voice one persona per author.
"""
from ideamap.service.config import Config
from ideamap.service.runtime import Runtime

runtime = Runtime(Config(rate_limit_rps=0.0))
engine = runtime.persona_engine

# Any search against the mock scholar returns papers with author ids;
# the engine queries those authors' own papers through the same client.
papers = runtime.scholar.search("memory aids for nursing handoffs", limit=8)
print(f"retrieved {len(papers)} papers; first authors:")
for record in papers[:4]:
    first = record.authors[0] if record.authors else None
    if first:
        print(f"  {record.paper_id}  {first.name} ({first.author_id})  cited {record.citation_count}")
print()

profiles = engine.personas_from_authors(papers)
print(f"profiled {len(profiles)} personas from the most cited authors:")
for profile in profiles:
    print(f"  {profile.persona_name}")
    for trait, value in profile.role_fields.items():
        print(f"    {trait}: {value}")
print()

# Each persona can immediately critique a question, same as RQ-sourced ones.
critiques = engine.generate_critiques(profiles[0], "Do checklists reduce handoff errors?")
for critique in critiques:
    print(f"[{critique.critique_aspect}] {critique.critique_detail}")
runtime.close()
