# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:

"""
The RESTful API.
"""
import logging
from typing import List, Optional

from fastapi import FastAPI, HTTPException, Request, Response
from pydantic import BaseModel, Field  # pylint: disable=no-name-in-module:

from mldegree.errors import (
    DegenerateModelError,
    InvalidCountsError,
    MlDegreeError,
    NoPositiveCriticalPointError,
    PolynomialError,
    ReactionParseError,
    UnsupportedShapeError,
)
from mldegree.handler import Method, handle_catalog, handle_ml_degree, handle_mle, solver_config
from mldegree.model import EquilibriumConstant
from mldegree.records import CatalogRecord, MLDegreeRecord, MLERecord, tool_version

API_VERSION = "1.0.0"
API = FastAPI(version=API_VERSION, docs_url=None, redoc_url=None)  # no Swagger or ReDoc endpoints


class Health(BaseModel):
    """API health data"""

    status: str = Field(default="OK")


class Version(BaseModel):
    """API version data"""

    package: str = Field(...)
    api: str = Field(...)


class MLDegreeRequest(BaseModel):
    """Request for an ML degree computation"""

    reaction: str = Field(...)
    ke: str = Field(default="generic")
    method: Method = Field(default=Method.FAITHFUL)
    counts: Optional[List[int]] = Field(default=None)
    seed: Optional[int] = Field(default=None)


class MLERequest(BaseModel):
    """Request for a maximum likelihood estimate"""

    reaction: str = Field(...)
    ke: str = Field(...)
    counts: List[int] = Field(...)
    seed: Optional[int] = Field(default=None)


def _generic_error_handler(e: Exception, status_code: int, message: str) -> Response:
    """Generic error handle that properly logs the entire exception context."""
    try:
        raise e
    except:  # pylint: disable=bare-except:
        logging.exception(message)
    return Response(status_code=status_code)


def _ke(text: str) -> EquilibriumConstant:
    try:
        return EquilibriumConstant.parse(text)
    except PolynomialError as e:
        raise HTTPException(status_code=400, detail=e.message) from e


@API.exception_handler(ReactionParseError)
async def parse_error_handler(_: Request, e: ReactionParseError) -> Response:
    return _generic_error_handler(e, 400, "Reaction parse error at offset %d: %s" % (e.offset, e.message))


@API.exception_handler(UnsupportedShapeError)
async def shape_error_handler(_: Request, e: UnsupportedShapeError) -> Response:
    return _generic_error_handler(e, 400, "Unsupported shape: %s" % e.message)


@API.exception_handler(InvalidCountsError)
async def counts_error_handler(_: Request, e: InvalidCountsError) -> Response:
    return _generic_error_handler(e, 400, "Invalid counts: %s" % e.message)


@API.exception_handler(DegenerateModelError)
async def degenerate_error_handler(_: Request, e: DegenerateModelError) -> Response:
    return _generic_error_handler(e, 422, "Degenerate model: %s" % e.message)


@API.exception_handler(NoPositiveCriticalPointError)
async def no_optimum_error_handler(_: Request, e: NoPositiveCriticalPointError) -> Response:
    return _generic_error_handler(e, 422, "No positive critical point: %s" % e.message)


@API.exception_handler(MlDegreeError)
async def mldegree_error_handler(_: Request, e: MlDegreeError) -> Response:
    return _generic_error_handler(e, 500, "Computation error: %s" % e)


@API.exception_handler(Exception)
async def exception_handler(_: Request, e: Exception) -> Response:
    return _generic_error_handler(e, 500, "Internal error: %s" % e)


@API.get("/health")
async def health() -> Health:
    """Return an API health indicator."""
    return Health()


@API.get("/version")
async def version() -> Version:
    """Return the API version, including both the package version and the API version"""
    return Version(package=tool_version(), api=API.version)


@API.post("/ml-degree")
async def ml_degree(request: MLDegreeRequest) -> MLDegreeRecord:
    """Compute the ML degree of a reaction."""
    record = handle_ml_degree(request.reaction, _ke(request.ke), request.method, solver_config(request.seed), request.counts)
    if not record.has_count:
        raise DegenerateModelError("No ML degree is available for %s with K_e=%s" % (record.reaction, record.ke))
    return record


@API.post("/mle")
async def mle(request: MLERequest) -> MLERecord:
    """Find the maximum likelihood estimate for observed counts."""
    return handle_mle(request.reaction, _ke(request.ke), request.counts, solver_config(request.seed))


@API.get("/catalog")
async def catalog() -> List[CatalogRecord]:
    """Run the catalog and return every row."""
    return handle_catalog()
