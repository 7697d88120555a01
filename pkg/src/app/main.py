from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from src.app.core.config import get_settings
from src.app.core.logging import configure_logging
from src.app.routers import examples, fan, phi, tables, verify, zeta

configure_logging(get_settings().log_level)

app = FastAPI(title="p-adic Stark API")

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(fan.router)
app.include_router(zeta.router)
app.include_router(phi.router)
app.include_router(verify.router)
app.include_router(tables.router)
app.include_router(examples.router)


@app.get("/health")
async def health_check():
    """
    Health check endpoint for monitoring the application status.
    """
    return {"status": "healthy"}
