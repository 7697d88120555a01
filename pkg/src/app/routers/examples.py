from typing import List

from fastapi import APIRouter, HTTPException
from fastapi.responses import JSONResponse

from src.app.core.errors import PadicStarkError
from src.app.schemas.bundle import ExampleBundle, ExampleSummary
from src.ingestion.ingest import get_example, ingest_directory, load_examples, summarize

router = APIRouter(tags=["examples"])


@router.get("/examples", response_model=List[ExampleSummary])
def list_examples():
    """Bundled examples"""
    try:
        return [summarize(b) for _, b in sorted(load_examples().items())]
    except PadicStarkError as e:
        raise HTTPException(status_code=500, detail=e.to_dict())


@router.get("/examples/{example_id}", response_model=ExampleBundle)
def example(example_id: int):
    try:
        return get_example(example_id)
    except PadicStarkError as e:
        raise HTTPException(status_code=404, detail=e.to_dict())


@router.post("/examples/validate")
def validate_examples():
    """Validate every bundle in the examples directory"""
    try:
        results = ingest_directory()
    except PadicStarkError as e:
        return JSONResponse(status_code=500, content={"status": "error", "detail": e.to_dict()})

    if not results:
        return JSONResponse(
            status_code=404, content={"status": "error", "detail": "No example bundles found"}
        )

    success_count = sum(1 for r in results if r["status"] == "success")
    error_count = len(results) - success_count

    if success_count == 0:
        return JSONResponse(
            status_code=500,
            content={"status": "error", "detail": "Every bundle failed validation", "results": results},
        )
    if error_count > 0:
        return JSONResponse(
            status_code=207,
            content={"status": "partial", "message": "Some bundles failed validation", "results": results},
        )
    return JSONResponse(
        status_code=200,
        content={"status": "success", "message": "All bundles are valid", "results": results},
    )
