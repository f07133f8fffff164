"""Command-line driver: run the pipeline, dump geodesic fields, serve the UI."""

import argparse
import sys
import time

from .errors import TexDeformError
from .formats import image_info, load_correspondences, save_result
from .geodesics import field_to_csv, multi_source_geodesics
from .mesh import load_obj
from .optimize import SolverConfig, run


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; this tool reserves 2 for
    # "stopped at max iterations", so usage errors exit 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def build_parser():
    parser = _Parser(prog="texdeform", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_run = sub.add_parser("run", help="texture-map and deform a mesh to match an image")
    p_run.add_argument("--mesh", required=True, help="input OBJ file")
    p_run.add_argument("--image", required=True, help="texture image (PNG/JPEG/GIF/BMP)")
    p_run.add_argument("--corr", required=True, help="correspondence JSON (schema v1)")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--alpha", type=float, default=0.5, help="projection-vs-detail blend [0,1]")
    p_run.add_argument("--beta", type=float, default=2.0, help="geodesic falloff exponent")
    p_run.add_argument("--eps", type=float, default=1e-3, help="geodesic falloff floor")
    p_run.add_argument("--tol", type=float, default=1e-3, help="relative energy-change tolerance")
    p_run.add_argument("--max-iters", type=int, default=20, dest="max_iters")
    p_run.add_argument("--laplacian", choices=("cotangent", "uniform"), default="cotangent")
    p_run.add_argument("--mode", choices=("lri", "literal"), default="lri")

    p_geo = sub.add_parser("geodesics", help="dump a multi-source geodesic field as CSV")
    p_geo.add_argument("--mesh", required=True)
    p_geo.add_argument("--sources", required=True, help="comma-separated vertex ids")
    p_geo.add_argument("--out", required=True, help="output CSV path")

    p_srv = sub.add_parser("serve", help="local HTTP service for the picker UI")
    p_srv.add_argument("--port", type=int, default=8000)
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--mesh", required=True)
    p_srv.add_argument("--image", required=True)
    return parser


def cmd_run(args):
    mesh = load_obj(args.mesh)
    image = image_info(args.image)
    corr = load_correspondences(args.corr).bind(mesh)
    cfg = SolverConfig(
        alpha=args.alpha,
        beta=args.beta,
        eps=args.eps,
        tol=args.tol,
        max_iterations=args.max_iters,
        laplacian=args.laplacian,
        mode=args.mode,
    )
    result = run(mesh, image, corr, cfg)
    save_result(result, args.out, image, cfg)
    state = "converged" if result.converged else "stopped at max iterations"
    print(f"{state} after {result.iterations} iteration(s)")
    print(
        f"energy total={result.report.total:.6g} "
        f"detail={result.report.detail:.6g} projection={result.report.projection:.6g}"
    )
    print(f"uvs outside image: {result.uv_out_of_image}")
    print(f"wrote {args.out}/mesh.obj and {args.out}/report.json")
    return 0 if result.converged else 2


def cmd_geodesics(args):
    mesh = load_obj(args.mesh)
    try:
        sources = [int(tok) for tok in args.sources.split(",") if tok.strip() != ""]
    except ValueError:
        print(f"invalid --sources value: {args.sources!r}", file=sys.stderr)
        return 1
    start = time.perf_counter()
    field = multi_source_geodesics(mesh, sources)
    elapsed = time.perf_counter() - start
    field_to_csv(field, args.out)
    print(f"{len(sources)} source(s) x {mesh.vertex_count} vertices in {elapsed:.3f} s")
    print(f"wrote {args.out}")
    return 0


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    app = create_app(args.mesh, args.image)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    handlers = {"run": cmd_run, "geodesics": cmd_geodesics, "serve": cmd_serve}
    try:
        return handlers[args.command](args)
    except TexDeformError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
