"""HTTP service: catalog import, QoS ingestion and queries, weight derivation, ranking.

All request and response bodies are JSON except QoS sample ingestion, which
accepts the collector CSV wire format.  Read endpoints are open; imports
require the admin bearer token when one is configured.  Responses are
reproducible: the same request against the same catalog version yields an
identical body apart from the ``generated_at`` stamp.
"""

from __future__ import annotations

import hmac
from datetime import datetime, timezone
from decimal import Decimal
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .ahp import JudgmentError, WeightVector, build_matrix, compute_weights, convergence_gap
from .catalog import Catalog, CatalogError
from .datastore import DataStore
from .pricing import UsageEstimate
from .qos import QosAverage
from .ranking import (
    BENEFIT_CRITERIA,
    COST_CRITERIA,
    RankRequest,
    RequestError,
    ordered_solutions,
    rank_by_cost_only,
)


class ApiError(Exception):
    """Carried to the JSON error handler: status, category, message, fields."""

    def __init__(self, status: int, category: str, message: str, fields: list[dict] | None = None):
        super().__init__(message)
        self.status = status
        self.category = category
        self.fields = fields or []


# ===================================================================
# Request schemas
# ===================================================================


class JudgmentIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    criterion_a: str
    criterion_b: str
    value: float


class WeightsIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    judgments: list[JudgmentIn]
    criteria: list[str] | None = None


class UsageIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    storage_gb: Decimal
    data_out_gb: Decimal
    data_in_gb: Decimal = Decimal(1)
    compute_instances: int = 1
    compute_hours: Decimal = Decimal(720)
    period_label: str = "30 days"


class RankIn(BaseModel):
    """Body of POST /api/rank.

    Weights may be given directly (``cost_weights``/``benefit_weights`` as
    criterion-to-weight mappings) or derived from pairwise judgments
    (``cost_judgments``/``benefit_judgments``); giving both for one side is
    an error.  Omitting both falls back to the default weights.
    """

    model_config = ConfigDict(extra="forbid")

    client_location: str
    usage: UsageIn
    providers: list[str] = Field(default_factory=list)
    locations: list[str] = Field(default_factory=list)
    min_memory_gb: float = 0.0
    max_memory_gb: float | None = None
    price_max: Decimal = Decimal(-1)
    cost_weights: dict[str, float] | None = None
    benefit_weights: dict[str, float] | None = None
    cost_judgments: list[JudgmentIn] | None = None
    benefit_judgments: list[JudgmentIn] | None = None
    single_provider: bool = False
    use_qos_estimates: bool = False
    normalize: bool = False


# ===================================================================
# Request assembly (shared with the CLI)
# ===================================================================


def _weights_from_mapping(mapping: dict[str, float], canonical: tuple[str, ...], group: str) -> WeightVector:
    unknown = sorted(set(mapping) - set(canonical))
    if unknown:
        raise RequestError(group, f"{group}: unknown criteria {', '.join(repr(u) for u in unknown)}")
    criteria = tuple(c for c in canonical if c in mapping)
    try:
        return WeightVector(criteria=criteria, weights=tuple(float(mapping[c]) for c in criteria))
    except ValueError as exc:
        raise RequestError(group, f"{group}: {exc}") from exc


def _weights_from_judgments(judgments: list[JudgmentIn], canonical: tuple[str, ...], group: str) -> WeightVector:
    try:
        matrix = build_matrix([(j.criterion_a, j.criterion_b, j.value) for j in judgments])
        vector = compute_weights(matrix)
    except JudgmentError as exc:
        raise RequestError(group, f"{group}: {exc}") from exc
    if not set(vector.criteria) <= set(canonical):
        extra = sorted(set(vector.criteria) - set(canonical))
        raise RequestError(group, f"{group}: unknown criteria {', '.join(repr(u) for u in extra)}")
    return vector


def build_rank_request(body: RankIn) -> RankRequest:
    """Turn the wire-level body into a core ranking request."""
    if body.cost_weights is not None and body.cost_judgments is not None:
        raise RequestError("cost_weights", "give cost_weights or cost_judgments, not both")
    if body.benefit_weights is not None and body.benefit_judgments is not None:
        raise RequestError("benefit_weights", "give benefit_weights or benefit_judgments, not both")

    kwargs: dict = {}
    if body.cost_weights is not None:
        kwargs["cost_weights"] = _weights_from_mapping(body.cost_weights, COST_CRITERIA, "cost_weights")
    elif body.cost_judgments is not None:
        kwargs["cost_weights"] = _weights_from_judgments(body.cost_judgments, COST_CRITERIA, "cost_judgments")
    if body.benefit_weights is not None:
        kwargs["benefit_weights"] = _weights_from_mapping(
            body.benefit_weights, BENEFIT_CRITERIA, "benefit_weights"
        )
    elif body.benefit_judgments is not None:
        kwargs["benefit_weights"] = _weights_from_judgments(
            body.benefit_judgments, BENEFIT_CRITERIA, "benefit_judgments"
        )

    try:
        usage = UsageEstimate(
            storage_gb=body.usage.storage_gb,
            data_out_gb=body.usage.data_out_gb,
            data_in_gb=body.usage.data_in_gb,
            compute_instances=body.usage.compute_instances,
            compute_hours=body.usage.compute_hours,
            period_label=body.usage.period_label,
        )
    except ValueError as exc:
        raise RequestError("usage", f"usage: {exc}") from exc

    return RankRequest(
        usage=usage,
        client_location=body.client_location,
        providers=tuple(body.providers),
        locations=tuple(body.locations),
        min_memory_gb=body.min_memory_gb,
        max_memory_gb=body.max_memory_gb,
        price_max=body.price_max,
        single_provider=body.single_provider,
        use_qos_estimates=body.use_qos_estimates,
        normalize=body.normalize,
        **kwargs,
    )


def request_echo(request: RankRequest) -> dict:
    """JSON-ready echo of the effective request, defaults resolved."""

    def _vector(vector: WeightVector) -> dict:
        return {"criteria": list(vector.criteria), "weights": list(vector.weights)}

    return {
        "client_location": request.client_location,
        "providers": list(request.providers),
        "locations": list(request.locations),
        "min_memory_gb": request.min_memory_gb,
        "max_memory_gb": request.max_memory_gb,
        "price_max": str(request.price_max),
        "usage": {
            "storage_gb": str(request.usage.storage_gb),
            "data_out_gb": str(request.usage.data_out_gb),
            "data_in_gb": str(request.usage.data_in_gb),
            "compute_instances": request.usage.compute_instances,
            "compute_hours": str(request.usage.compute_hours),
            "period_label": request.usage.period_label,
        },
        "cost_weights": _vector(request.cost_weights),
        "benefit_weights": _vector(request.benefit_weights),
        "single_provider": request.single_provider,
        "use_qos_estimates": request.use_qos_estimates,
        "normalize": request.normalize,
    }


def rank_payload(
    catalog: Catalog,
    averages: list[QosAverage],
    request: RankRequest,
    by: str = "ratio",
    limit: int = 100,
    offset: int = 0,
) -> dict:
    """The full /api/rank response body; also produced verbatim by the CLI."""
    if by == "cost":
        results = rank_by_cost_only(request, catalog, averages)
    else:
        results = ordered_solutions(request, catalog, averages)
    window = results[offset : offset + limit]
    return {
        "catalog_version": catalog.version,
        "display_currency": catalog.display_currency,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "order_by": by,
        "total_results": len(results),
        "limit": limit,
        "offset": offset,
        "request_echo": request_echo(request),
        "results": [combination.as_dict() for combination in window],
    }


def averages_payload(averages: list[QosAverage]) -> dict:
    return {
        "averages": [
            {
                "provider": a.provider,
                "datacenter_location": a.datacenter_location,
                "service_kind": a.service_kind,
                "client_location": a.client_location,
                "mean_latency_ms": a.mean_latency_ms,
                "mean_download_mbps": a.mean_download_mbps,
                "mean_upload_mbps": a.mean_upload_mbps,
                "sample_count": a.sample_count,
                "estimated": a.estimated,
            }
            for a in averages
        ]
    }


def _tier_payload(tiers) -> list[dict]:
    return [
        {
            "quota_min_gb": str(t.quota_min_gb),
            "quota_max_gb": None if t.quota_max_gb is None else str(t.quota_max_gb),
            "unit_price_per_gb": str(t.unit_price_per_gb),
        }
        for t in tiers
    ]


def offers_payload(catalog: Catalog, kind: str | None = None) -> dict:
    payload: dict = {
        "catalog_version": catalog.version,
        "display_currency": catalog.display_currency,
    }
    if kind in (None, "compute"):
        payload["compute"] = [
            {
                "provider": o.provider,
                "location": o.location,
                "service_name": o.service_name,
                "memory_gb": o.memory_gb,
                "cpu_cores": o.cpu_cores,
                "cpu_speed_ghz": o.cpu_speed_ghz,
                "disk_gb": o.disk_gb,
                "price_per_hour": str(o.price_per_hour),
            }
            for o in catalog.compute_offers
        ]
    if kind in (None, "storage"):
        payload["storage"] = [
            {
                "provider": o.provider,
                "location": o.location,
                "service_name": o.service_name,
                "max_capacity_gb": None if o.max_capacity_gb is None else str(o.max_capacity_gb),
                "tiers": _tier_payload(o.tiers),
            }
            for o in catalog.storage_offers
        ]
    if kind in (None, "network"):
        payload["network"] = [
            {
                "provider": o.provider,
                "location": o.location,
                "inbound_tiers": _tier_payload(o.inbound_tiers),
                "outbound_tiers": _tier_payload(o.outbound_tiers),
            }
            for o in catalog.network_offers
        ]
    return payload


# ===================================================================
# Application factory
# ===================================================================


def create_app(
    store: DataStore | None = None,
    admin_token: str | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    """Build the service application around a :class:`DataStore`."""
    store = store if store is not None else DataStore()
    app = FastAPI(title="cloudrank", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.store = store

    def _current_catalog() -> Catalog:
        catalog = store.catalog
        if catalog is None:
            raise ApiError(409, "conflict", "no catalog loaded; import one first")
        return catalog

    def _require_admin(request: Request) -> None:
        if admin_token is None:
            return
        supplied = request.headers.get("Authorization", "")
        if not hmac.compare_digest(supplied, f"Bearer {admin_token}"):
            raise ApiError(401, "auth", "missing or invalid bearer token")

    def _require_content_type(request: Request, expected: tuple[str, ...]) -> None:
        declared = request.headers.get("Content-Type", "").split(";")[0].strip().lower()
        if declared not in expected:
            raise ApiError(415, "media_type", f"expected content type {' or '.join(expected)}")

    # -- errors ----------------------------------------------------------

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError) -> JSONResponse:
        body = {"error": {"category": exc.category, "message": str(exc)}}
        if exc.fields:
            body["error"]["fields"] = exc.fields
        return JSONResponse(status_code=exc.status, content=body)

    @app.exception_handler(RequestError)
    async def _request_error(_request: Request, exc: RequestError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={
                "error": {
                    "category": "validation",
                    "message": str(exc),
                    "fields": [{"field": exc.field, "message": str(exc)}],
                }
            },
        )

    @app.exception_handler(CatalogError)
    async def _catalog_error(_request: Request, exc: CatalogError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={
                "error": {
                    "category": "validation",
                    "message": str(exc),
                    "fields": [{"field": "catalog", "message": str(exc)}],
                }
            },
        )

    @app.exception_handler(RequestValidationError)
    async def _schema_error(_request: Request, exc: RequestValidationError) -> JSONResponse:
        fields = [
            {
                "field": ".".join(str(part) for part in err["loc"] if part != "body"),
                "message": err["msg"],
            }
            for err in exc.errors()
        ]
        return JSONResponse(
            status_code=400,
            content={
                "error": {
                    "category": "validation",
                    "message": "request body failed validation",
                    "fields": fields,
                }
            },
        )

    # -- routes ----------------------------------------------------------

    @app.post("/api/rank")
    async def rank(
        body: RankIn,
        limit: int = Query(default=100, ge=1),
        offset: int = Query(default=0, ge=0),
        by: Literal["ratio", "cost"] = Query(default="ratio"),
    ) -> JSONResponse:
        catalog = _current_catalog()
        request = build_rank_request(body)
        payload = rank_payload(catalog, store.averages(), request, by=by, limit=limit, offset=offset)
        return JSONResponse(payload)

    @app.post("/api/weights")
    async def weights(body: WeightsIn) -> JSONResponse:
        try:
            matrix = build_matrix(
                [(j.criterion_a, j.criterion_b, j.value) for j in body.judgments],
                criteria=body.criteria,
            )
            vector = compute_weights(matrix)
            gap = convergence_gap(matrix)
        except JudgmentError as exc:
            raise ApiError(
                400, "validation", str(exc), fields=[{"field": "judgments", "message": str(exc)}]
            ) from exc
        return JSONResponse(
            {
                "criteria": list(vector.criteria),
                "weights": list(vector.weights),
                "convergence_gap": gap,
            }
        )

    @app.post("/api/catalog/import")
    async def catalog_import(request: Request) -> JSONResponse:
        _require_admin(request)
        _require_content_type(request, ("application/json",))
        text = (await request.body()).decode("utf-8")
        catalog = store.import_catalog(text)  # CatalogError -> 400 via handler
        return JSONResponse(
            {
                "catalog_version": catalog.version,
                "counts": {
                    "providers": len(catalog.providers),
                    "locations": len(catalog.locations),
                    "compute": len(catalog.compute_offers),
                    "storage": len(catalog.storage_offers),
                    "network": len(catalog.network_offers),
                },
            }
        )

    @app.post("/api/qos/import")
    async def qos_import(request: Request) -> JSONResponse:
        _require_admin(request)
        _require_content_type(request, ("text/csv", "text/plain"))
        text = (await request.body()).decode("utf-8")
        report = store.import_samples_csv(text)
        errors = [{"line": e.line, "message": e.message} for e in report.errors]
        body = {"inserted": report.inserted, "duplicates": report.duplicates, "errors": errors}
        if any(e.line == 1 for e in report.errors):
            status = 400  # header rejected, whole document refused
        elif report.errors:
            status = 207  # some rows rejected, per-line detail included
        else:
            status = 200
        return JSONResponse(status_code=status, content=body)

    @app.get("/api/qos/averages")
    async def qos_averages(client_location: str | None = Query(default=None)) -> JSONResponse:
        averages = store.averages()
        if client_location is not None:
            averages = [a for a in averages if a.client_location == client_location]
        return JSONResponse(averages_payload(averages))

    @app.get("/api/catalog/offers")
    async def catalog_offers(
        kind: Literal["compute", "storage", "network"] | None = Query(default=None),
    ) -> JSONResponse:
        catalog = _current_catalog()
        return JSONResponse(offers_payload(catalog, kind))

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
