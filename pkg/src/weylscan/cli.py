"""Command-line client for the verification service.

By default each command talks to an in-process instance of the FastAPI app
over an ASGI transport; --server points it at a running instance instead.
Exit codes: 0 success or decisive verdict, 1 usage/validation error,
2 inconclusive verdict, 3 internal failure (cap exceeded, certification or
sampling failure).
"""

from __future__ import annotations

import asyncio
import csv
import io
import json
import sys

import click
import httpx

EXIT_USAGE = 1
EXIT_INCONCLUSIVE = 2
EXIT_INTERNAL = 3


class ServiceClient:
    def __init__(self, server: str | None):
        self.server = server

    async def _request_async(self, method: str, path: str, **kwargs):
        if self.server:
            async with httpx.AsyncClient(base_url=self.server, timeout=None) as client:
                return await client.request(method, path, **kwargs)
        from .service import create_app
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(transport=transport, base_url="http://weylscan",
                                     timeout=None) as client:
            return await client.request(method, path, **kwargs)

    def request(self, method: str, path: str, **kwargs) -> dict:
        resp = asyncio.run(self._request_async(method, path, **kwargs))
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("detail")
            except Exception:
                detail = resp.text
            if isinstance(detail, dict):
                message = detail.get("message", str(detail))
                code = detail.get("code", "internal")
            else:
                message = str(detail)
                code = "validation" if resp.status_code in (400, 422) else "internal"
            click.echo(f"error: {message}", err=True)
            sys.exit(EXIT_USAGE if code == "validation" else EXIT_INTERNAL)
        return resp.json()


pass_client = click.make_pass_decorator(ServiceClient)


def _emit_json(data):
    click.echo(json.dumps(data, indent=2))


def _system_label(family: str, rank: int) -> str:
    return f"{family.upper()}{rank}"


def _parse_coords(value: str | None):
    if value is None:
        return None
    try:
        return [float(x) for x in value.replace(" ", "").split(",") if x]
    except ValueError:
        click.echo(f"error: cannot parse coordinates {value!r}", err=True)
        sys.exit(EXIT_USAGE)


@click.group()
@click.option("--server", default=None, metavar="URL",
              help="Base URL of a running weylscan service; default is in-process.")
@click.pass_context
def main(ctx, server):
    """Exact root-system verification and L2 convergence scans."""
    ctx.obj = ServiceClient(server)


@main.group()
def roots():
    """Root system construction and inspection."""


@roots.command("info")
@click.option("--family", required=True)
@click.option("--rank", required=True, type=int)
@pass_client
def roots_info(client, family, rank):
    """Canonical JSON document of a root system."""
    _emit_json(client.request("GET", "/roots/info",
                              params={"family": family, "rank": rank}))


@main.group("weyl")
def weyl_group():
    """Weyl group operations."""


@weyl_group.command("order")
@click.option("--family", required=True)
@click.option("--rank", required=True, type=int)
@click.option("--cap", default=10**7, show_default=True, type=int)
@pass_client
def weyl_order(client, family, rank, cap):
    """Print the group order as a decimal integer."""
    data = client.request("GET", "/weyl/order",
                          params={"family": family, "rank": rank, "cap": cap})
    click.echo(str(data["order"]))


@main.group("subroots")
def subroots_grp():
    """Simple subroot systems and ratio tables."""


@subroots_grp.command("table")
@click.option("--max-rank", default=8, show_default=True, type=int)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@pass_client
def subroots_table(client, max_rank, fmt):
    """Maximal simple-subsystem ratio table, one row per (system, m) with ties."""
    data = client.request("GET", "/subroots/table", params={"max_rank": max_rank})
    if fmt == "json":
        _emit_json(data)
        return
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["family", "rank", "subsystem", "m", "psi_size", "ratio"])
    for row in data["rows"]:
        writer.writerow([row["family"], row["rank"], row["subsystem"],
                         row["m"], row["psi_size"], row["ratio"]])
    click.echo(buf.getvalue().rstrip("\n"))


@main.command()
@click.option("--family", default=None)
@click.option("--rank", default=None, type=int)
@click.option("--factors", default=None, metavar="LIST",
              help='Comma-separated factors for a reducible system, e.g. "B3,A1".')
@pass_client
def threshold(client, family, rank, factors):
    """Print the exact L2 threshold k* as p/q."""
    if factors:
        system = "x".join(p.strip() for p in factors.split(","))
    elif family and rank is not None:
        system = _system_label(family, rank)
    else:
        click.echo("error: give --family/--rank or --factors", err=True)
        sys.exit(EXIT_USAGE)
    data = client.request("GET", "/threshold", params={"system": system})
    click.echo(data["k_star"])


@main.command("eval")
@click.option("--family", required=True)
@click.option("--rank", required=True, type=int)
@click.option("--h0", default=None, metavar="COORDS",
              help="Span-basis coordinates of H0; defaults to the canonical regular point.")
@click.option("--point", required=True, metavar="COORDS")
@click.option("--k", default="1", show_default=True)
@pass_client
def eval_cmd(client, family, rank, h0, point, k):
    """Evaluate the Weyl-sum numerator and the integrand at one point."""
    body = {
        "system": _system_label(family, rank),
        "point": _parse_coords(point),
        "k": k,
        "h0": _parse_coords(h0),
    }
    _emit_json(client.request("POST", "/eval", json=body))


@main.command()
@click.option("--family", required=True)
@click.option("--rank", required=True, type=int)
@click.option("--h0", default=None, metavar="COORDS")
@click.option("--k", required=True)
@click.option("--shells", default=12, show_default=True, type=int)
@click.option("--samples", default=100_000, show_default=True, type=int)
@click.option("--seed", required=True, type=int)
@click.option("--r0", default=1.0, show_default=True, type=float)
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json")
@pass_client
def scan(client, family, rank, h0, k, shells, samples, seed, r0, fmt):
    """Dyadic-shell convergence scan; exit 0 on a decisive verdict, 2 otherwise."""
    body = {
        "system": _system_label(family, rank),
        "k": k, "h0": _parse_coords(h0), "shells": shells,
        "samples": samples, "seed": seed, "r0": r0,
    }
    data = client.request("POST", "/scan", json=body)
    _emit_json(data)
    if data["verdict"] not in ("converges", "diverges"):
        sys.exit(EXIT_INCONCLUSIVE)


@main.command("lemma-constants")
@click.option("--family", required=True)
@click.option("--rank", required=True, type=int)
@click.option("--drop-index", default=1, show_default=True, type=int)
@click.option("--grid", default=1e-3, show_default=True, type=float)
@pass_client
def lemma_constants(client, family, rank, drop_index, grid):
    """Certified projection constants a, b = 1/a + 1, and C."""
    body = {"system": _system_label(family, rank),
            "drop_index": drop_index, "grid": grid}
    data = client.request("POST", "/lemma-constants", json=body)
    _emit_json({"a": data["a"], "b": data["b"], "C": data["C"],
                "grid": data["grid"], "certified": data["certified"]})


@main.group()
def verify():
    """Run one of the named verification suites."""


def _verify_sample_options(f):
    f = click.option("--seed", default=0, show_default=True, type=int)(f)
    f = click.option("--samples", default=10_000, show_default=True, type=int)(f)
    f = click.option("--grid", default=1e-3, show_default=True, type=float)(f)
    f = click.option("--drop-index", default=1, show_default=True, type=int)(f)
    f = click.option("--rank", required=True, type=int)(f)
    f = click.option("--family", required=True)(f)
    return f


def _run_lemma(client, which, family, rank, drop_index, grid, samples, seed):
    body = {"system": _system_label(family, rank), "drop_index": drop_index,
            "grid": grid, "samples": samples, "seed": seed}
    data = client.request("POST", f"/verify/{which}", json=body)
    _emit_json(data)
    if not data["holds"]:
        sys.exit(EXIT_INTERNAL)


@verify.command("lemma1")
@_verify_sample_options
@pass_client
def verify_lemma1(client, family, rank, drop_index, grid, samples, seed):
    """Projection identity, rank, and the a/b bounds on sampled R_1 points."""
    _run_lemma(client, "lemma1", family, rank, drop_index, grid, samples, seed)


@verify.command("lemma2")
@_verify_sample_options
@pass_client
def verify_lemma2(client, family, rank, drop_index, grid, samples, seed):
    """The <H, alpha> >= C|H| bound on sampled (H, alpha) pairs."""
    _run_lemma(client, "lemma2", family, rank, drop_index, grid, samples, seed)


@verify.command("lemma3")
@click.option("--family", default=None)
@click.option("--rank", default=None, type=int)
@click.option("--system", default=None, metavar="LABEL",
              help='System label, products allowed, e.g. "B3xA1xA1xA1".')
@pass_client
def verify_lemma3(client, family, rank, system):
    """Exact ratio inequality over every proper base subset."""
    if system is None:
        if not (family and rank is not None):
            click.echo("error: give --system or --family/--rank", err=True)
            sys.exit(EXIT_USAGE)
        system = _system_label(family, rank)
    data = client.request("POST", "/verify/lemma3", json={"system": system})
    _emit_json(data)


@verify.command("appendix-a")
@click.option("--max-rank", default=8, show_default=True, type=int)
@pass_client
def verify_appendix_a(client, max_rank):
    """Check every published ratio-table row against exhaustive enumeration."""
    data = client.request("POST", "/verify/appendix-a", json={"max_rank": max_rank})
    _emit_json({k: data[k] for k in ("max_rank", "instances", "all_ok")})
    if not data["all_ok"]:
        sys.exit(EXIT_INTERNAL)


@main.command()
@click.option("--family", required=True)
@click.option("--rank", required=True, type=int)
@pass_client
def corollaries(client, family, rank):
    """Exact consequences: the 3/2 power and the L^p exponent."""
    _emit_json(client.request("GET", "/corollaries",
                              params={"system": _system_label(family, rank)}))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host, port):
    """Run the verification service."""
    import uvicorn
    from .service import create_app
    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
