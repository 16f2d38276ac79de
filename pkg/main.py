#!/usr/bin/env python3
"""Parabolic geometry engine for G(3) and F(4) - command line entry point."""

from __future__ import annotations
import argparse
import asyncio
import json
import logging
import sys
from typing import List, Optional, Sequence

import structlog

from config import settings
from models.reports import CaseRequest, ReductionMode
from models.roots import DiagramId, SuperAlgebraName
from services.algebra_builder import algebra_builder
from services.case_runner import CaseRunner, all_requests, run_case
from services.geometry import geometry_service
from services.root_system import root_system
from services.superfields import superfield_service
from utils.renderers import render_case_report, render_edges


def configure_logging(json_logs: Optional[bool] = None):
    """Configure structured logging."""
    json_logs = settings.log_json if json_logs is None else json_logs
    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=logging.DEBUG if settings.debug else getattr(logging, settings.log_level),
    )
    renderer = structlog.processors.JSONRenderer() if json_logs else structlog.dev.ConsoleRenderer()
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


logger = structlog.get_logger()


def _algebras(value: str) -> List[SuperAlgebraName]:
    if value.lower() == "all":
        return [SuperAlgebraName.G3, SuperAlgebraName.F4]
    return [SuperAlgebraName.parse(value)]


def _request(args: argparse.Namespace) -> CaseRequest:
    crossing = [int(ch) for ch in args.parabolic.replace(",", "").replace(" ", "")]
    return CaseRequest(
        algebra=args.algebra,
        diagram=args.diagram,
        crossing=crossing,
        reduce=ReductionMode(args.reduce),
        threshold=args.threshold,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parabolic", description=__doc__)
    parser.add_argument("--console-logs", action="store_true", help="human readable logs instead of JSON")
    commands = parser.add_subparsers(dest="command", required=True)

    def case_options(sub: argparse.ArgumentParser):
        sub.add_argument("--algebra", required=True, help="g3 or f4")
        sub.add_argument("--diagram", required=True, help="I..VI")
        sub.add_argument("--parabolic", required=True, help="crossed nodes, e.g. 1,3")
        sub.add_argument("--reduce", choices=[m.value for m in ReductionMode], default=ReductionMode.AUTO.value)
        sub.add_argument("--threshold", type=int, default=None)

    case = commands.add_parser("case", help="run one parabolic case")
    case_options(case)
    case.add_argument("--format", choices=("json", "text"), default="text")

    verify = commands.add_parser("verify", help="run every case and the reference checks")
    verify.add_argument("--algebra", default="all", help="g3, f4 or all")
    verify.add_argument("--reduce", choices=[m.value for m in ReductionMode], default=ReductionMode.AUTO.value)
    verify.add_argument("--jobs", type=int, default=None)
    verify.add_argument("--format", choices=("json", "text"), default="text")

    export = commands.add_parser("export", help="write an algebra as JSON")
    export.add_argument("--algebra", required=True)
    export.add_argument("--diagram", default="I")
    export.add_argument("--parabolic", default=None, help="omit to export the simple algebra itself")
    export.add_argument("--reduce", choices=[m.value for m in ReductionMode], default=ReductionMode.AUTO.value)
    export.add_argument("--threshold", type=int, default=None)
    export.add_argument("--output", default=None)

    atlas = commands.add_parser("atlas", help="growth-vector table")
    atlas.add_argument("--algebra", default="all")
    atlas.add_argument("--check", action="store_true", help="diff against the golden tables")

    roots = commands.add_parser("roots", help="negative roots of a diagram")
    roots.add_argument("--algebra", required=True)
    roots.add_argument("--diagram", required=True)

    graph = commands.add_parser("graph", help="adjacency graph of parabolic classes")
    graph.add_argument("--algebra", required=True)

    integrals = commands.add_parser("integrals", help="integral subspace witnesses of maximal parabolics")
    integrals.add_argument("--algebra", default="all")

    fields = commands.add_parser("fields", help="vector-field realisation checks")
    fields.add_argument("--which", choices=("realisation", "contact", "all"), default="all")
    return parser


class ParabolicApplication:
    """Command line application."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.runner: Optional[CaseRunner] = None

    async def initialize(self):
        logger.info("Initializing", command=self.args.command, data_dir=settings.data_dir)
        self.runner = CaseRunner(jobs=getattr(self.args, "jobs", None))
        await self.runner.__aenter__()

    async def cleanup(self):
        if self.runner is not None:
            await self.runner.__aexit__(None, None, None)
        logger.info("Cleanup complete")

    async def run(self) -> int:
        handler = getattr(self, f"cmd_{self.args.command}")
        return await handler()

    async def cmd_case(self) -> int:
        report = run_case(_request(self.args))
        if self.args.format == "json":
            print(json.dumps(report.dict(), indent=2, sort_keys=True))
        else:
            print(render_case_report(report), end="")
        return 0 if report.passed else 1

    async def cmd_verify(self) -> int:
        algebras = _algebras(self.args.algebra)
        available = await self.runner.verify_fixtures()
        missing = [algebra.value for algebra in algebras if algebra not in available]
        if missing:
            logger.error("Golden atlas missing", algebras=missing)
            return 1
        reports = await self.runner.verify_all(all_requests(algebras, ReductionMode(self.args.reduce)))
        failures = [report.case for report in reports if not report.passed]
        for algebra in algebras:
            diff = await self.runner.atlas_diff(algebra)
            if diff:
                failures.append(f"{algebra.value} atlas")
                print("\n".join(diff))
            if not geometry_service.special_cases_check(algebra).success:
                failures.append(f"{algebra.value} null spans")
            if not geometry_service.verify_equivalences(algebra).success:
                failures.append(f"{algebra.value} equivalences")
        await self.runner.write_reports(reports)
        if self.args.format == "json":
            print(json.dumps([report.dict() for report in reports], indent=2, sort_keys=True))
        else:
            for report in reports:
                mark = "ok  " if report.passed else "FAIL"
                print(f"{mark} {report.case:<14} {report.status:<19} {report.total_dim} {report.error_message}".rstrip())
            print(f"{len(reports) - len([r for r in reports if not r.passed])}/{len(reports)} cases passed")
        if failures:
            logger.error("Verification failed", failures=failures)
        return 1 if failures else 0

    async def cmd_export(self) -> int:
        algebra = SuperAlgebraName.parse(self.args.algebra)
        if self.args.parabolic is None:
            path = await self.runner.export_full(algebra, self.args.diagram.upper(), self.args.output)
        else:
            path = await self.runner.export_case(_request(self.args), self.args.output)
        print(path)
        return 0

    async def cmd_atlas(self) -> int:
        status = 0
        for algebra in _algebras(self.args.algebra):
            if self.args.check:
                diff = await self.runner.atlas_diff(algebra)
                if diff:
                    print("\n".join(diff))
                    status = 1
            else:
                print(geometry_service.atlas(algebra), end="")
        return status

    async def cmd_roots(self) -> int:
        print(root_system.negative_root_table(DiagramId.parse(self.args.algebra, self.args.diagram)), end="")
        return 0

    async def cmd_graph(self) -> int:
        print(render_edges(geometry_service.adjacency_graph(SuperAlgebraName.parse(self.args.algebra))), end="")
        return 0

    async def cmd_integrals(self) -> int:
        status = 0
        for algebra in _algebras(self.args.algebra):
            for parabolic, dims in geometry_service.maximal_integrals(algebra):
                symbol = algebra_builder.build_symbol(parabolic)
                for target in dims:
                    result = geometry_service.integral_witness(symbol, target)
                    found = ", ".join(result.labels) if result.success else "none-found"
                    print(f"{parabolic} {target}: {found}")
                    if not result.success:
                        status = 1
        return status

    async def cmd_fields(self) -> int:
        reports = []
        if self.args.which in ("realisation", "all"):
            reports.append(await superfield_service.check_realisation())
        if self.args.which in ("contact", "all"):
            reports.append(await superfield_service.check_contact())
        for report in reports:
            dims = report.closure.dims if report.closure is not None else None
            print(f"{report.name}: closure {dims} origin {report.origin_span} checks {report.checks}")
            if report.error_message:
                print(f"  {report.error_message}")
        return 0 if all(report.success for report in reports) else 1


async def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point."""
    args = build_parser().parse_args(argv)
    configure_logging(json_logs=False if args.console_logs else None)
    app = ParabolicApplication(args)
    try:
        await app.initialize()
        return await app.run()
    except KeyboardInterrupt:
        logger.info("Stopped by user")
        return 1
    except Exception as e:
        logger.error("Command failed", command=args.command, error=str(e), exc_info=True)
        return 1
    finally:
        await app.cleanup()


if __name__ == "__main__":
    sys.exit(asyncio.run(main()))
