"""The publication catalog: ingest, dedup, persist canonically, count.

Catalog entries mirror the review's extraction form: DOI, how the paper was
collected, the meta-research area, and the schemes extracted from it. DOIs
are normalized (lowercased, resolver prefix stripped) before the uniqueness
check, and files always serialize to the same canonical bytes.
"""

import tempfile
from pathlib import Path

from taxunify import (
    Catalog,
    CatalogEntry,
    CollectionSubtag,
    CollectionType,
    DuplicateDoiError,
    MetaResearchArea,
    catalog_stats,
    load_catalog,
    normalize_doi,
    save_catalog,
)

print(normalize_doi("https://doi.org/10.1145/EXAMPLE"))  # -> 10.1145/example

catalog = Catalog(entries=(
    CatalogEntry(doi="10.1145/a", collection_type=CollectionType.INCLUDED,
                 subtag=CollectionSubtag.PROPOSES_NEW,
                 area=MetaResearchArea.METHODS, year=2019, venue="ICSE"),
    CatalogEntry(doi="10.1007/b", collection_type=CollectionType.INCLUDED,
                 subtag=CollectionSubtag.EXTENDS_EXISTING,
                 area=MetaResearchArea.EVALUATION, year=2019),
    CatalogEntry(doi="10.1016/c",
                 collection_type=CollectionType.INCLUDED_BY_REFERENCE,
                 area=MetaResearchArea.METHODS, year=2020),
))

# Duplicates are eliminated: the same DOI in any spelling is rejected.
try:
    Catalog(entries=catalog.entries + (
        CatalogEntry(doi="https://doi.org/10.1145/A",
                     collection_type=CollectionType.INCLUDED,
                     area=MetaResearchArea.METHODS, year=2021),))
except DuplicateDoiError as error:
    print(f"rejected: {error}")

with tempfile.TemporaryDirectory() as directory:
    path = Path(directory) / "catalog.json"
    save_catalog(catalog, path)
    assert load_catalog(path) == catalog
    print(f"round-trip ok, {path.stat().st_size} canonical bytes")

for group in ("year", "area", "collectionType"):
    table = catalog_stats(catalog, group)
    print(f"by {group}: " + ", ".join(f"{k}={n}" for k, n in table.rows)
          + f" (total {table.total})")
