import json
import logging
from pathlib import Path
from typing import Union

import pandas as pd

from .config import RunManifest

logger = logging.getLogger(__name__)

MANIFEST_PREFIX = "# manifest "


def write_json(path: Union[str, Path], payload: dict, manifest: RunManifest) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = dict(payload, manifest=manifest.model_dump(mode='json'))
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(document, f, indent=2, sort_keys=True)
        f.write('\n')
    logger.info(f"Saved {path}")
    return path


def write_csv(path: Union[str, Path], rows: list[dict], manifest: RunManifest) -> Path:
    """CSV table preceded by a single `# manifest {...}` comment line"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        header = json.dumps(manifest.model_dump(mode="json"), sort_keys=True)
        f.write(MANIFEST_PREFIX + header)
        f.write('\n')
        pd.DataFrame(rows).to_csv(f, index=False, lineterminator='\n')
    logger.info(f"Saved {len(rows)} rows to {path}")
    return path


def read_json(path: Union[str, Path]) -> dict:
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)
