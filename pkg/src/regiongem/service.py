"""HTTP query service over an immutable index snapshot.

Endpoints: POST /api/query (multipart image upload), GET /api/items/{id},
GET /api/items/{id}/thumb, GET /api/health. Handlers are synchronous and
share only read-only state, so requests never block each other.
"""

from __future__ import annotations

import hashlib
import io
import logging
import time
from contextlib import asynccontextmanager
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import quote

from fastapi import FastAPI, File, HTTPException, Query, Response, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from PIL import Image, ImageOps

from regiongem.errors import RegionGemError
from regiongem.features import describe
from regiongem.imaging import decode_image, downscale_max_dim
from regiongem.index import FeatureIndex, load_index
from regiongem.similarity import rank

logger = logging.getLogger("regiongem.service")

THUMB_SIDE = 256
MAX_K = 100


@dataclass
class ServiceConfig:
    index_path: str
    max_upload_bytes: int = 8 * 1024 * 1024
    default_k: int = 20
    cors_origins: tuple[str, ...] = ()
    thumb_cache_dir: str | None = None  # default: <index_path>.thumbs/


def _thumb_cache_path(cache_dir: Path, image_id: str, side: int) -> Path:
    key = hashlib.sha1(image_id.encode("utf-8")).hexdigest()
    return cache_dir / f"{key}_{side}.png"


def create_app(config: ServiceConfig) -> FastAPI:
    cache_dir = Path(config.thumb_cache_dir or f"{config.index_path}.thumbs")

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        try:
            app.state.index = load_index(config.index_path)
            logger.info("loaded index with %d entries", len(app.state.index))
        except (RegionGemError, OSError) as exc:
            logger.error("index %s failed to load: %s", config.index_path, exc)
            app.state.index = None
        yield

    app = FastAPI(title="regiongem", lifespan=lifespan)
    app.state.index = None
    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(config.cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    def current_index() -> FeatureIndex:
        index = app.state.index
        if index is None:
            raise HTTPException(status_code=503, detail="index not loaded")
        return index

    @app.get("/api/health")
    def health():
        index = current_index()
        return {
            "status": "ok",
            "indexSize": len(index),
            "binConfig": {
                "hueBins": index.config.hue_bins,
                "satBins": index.config.sat_bins,
                "valBins": index.config.val_bins,
            },
            "formatVersion": index.format_version,
        }

    @app.post("/api/query")
    def query_image(
        image: UploadFile = File(...),
        k: int | None = Query(default=None, description="result count, 1..100"),
    ):
        index = current_index()
        if k is None:
            k = config.default_k
        if not 1 <= k <= MAX_K:
            raise HTTPException(status_code=400, detail=f"k must be in [1, {MAX_K}]")
        data = image.file.read(config.max_upload_bytes + 1)
        if len(data) > config.max_upload_bytes:
            raise HTTPException(
                status_code=400,
                detail=f"upload exceeds {config.max_upload_bytes} bytes",
            )
        started = time.perf_counter()
        try:
            rgb = decode_image(data)
        except RegionGemError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        if index.downscale:
            rgb = downscale_max_dim(rgb, index.downscale)
        feature = describe(rgb, index.config)
        result = rank(feature, index, k)
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        return {
            "query": {
                "width": rgb.width,
                "height": rgb.height,
                "extractionMs": round(elapsed_ms, 3),
            },
            "results": [
                {
                    "imageId": hit.image_id,
                    "distance": hit.distance,
                    "classLabel": hit.class_label,
                    "thumbnailUrl": f"/api/items/{quote(hit.image_id, safe='')}/thumb",
                }
                for hit in result.hits
            ],
        }

    @app.get("/api/items/{image_id:path}/thumb")
    def item_thumb(image_id: str):
        index = current_index()
        entry = index.get(image_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown imageId {image_id!r}")
        cached = _thumb_cache_path(cache_dir, image_id, THUMB_SIDE)
        if not cached.is_file():
            try:
                img = Image.open(entry.source_path)
                img = ImageOps.exif_transpose(img).convert("RGB")
            except (OSError, SyntaxError) as exc:
                raise HTTPException(
                    status_code=404, detail=f"source image unavailable: {exc}"
                ) from exc
            img.thumbnail((THUMB_SIDE, THUMB_SIDE), Image.Resampling.BILINEAR)
            cache_dir.mkdir(parents=True, exist_ok=True)
            buf = io.BytesIO()
            img.save(buf, format="PNG")
            cached.write_bytes(buf.getvalue())
        return Response(content=cached.read_bytes(), media_type="image/png")

    @app.get("/api/items/{image_id:path}")
    def item_metadata(image_id: str):
        index = current_index()
        entry = index.get(image_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown imageId {image_id!r}")
        return {
            "imageId": entry.image_id,
            "classLabel": entry.class_label,
            "sourcePath": entry.source_path,
        }

    return app
