# backend/dashboard/bp.py
from flask import Blueprint, Response, current_app, jsonify, request

from backend.dashboard.core import (
    bench_config_from_query,
    dissect_payload,
    run_csv,
    run_payload,
    scenarios_payload,
    stream_rows,
)
from backend.physim import SimulationAssertion

bench_bp = Blueprint("bench", __name__)


def _error(message, status=400):
    return jsonify({"status": "error", "message": str(message)}), status


@bench_bp.route("/")
def index():
    return jsonify(scenarios_payload())


@bench_bp.route("/run/<scenario>")
def run(scenario):
    try:
        cfg = bench_config_from_query(scenario, request.args)
    except ValueError as e:
        return _error(e)
    try:
        if request.args.get("format") == "csv":
            return Response(run_csv(cfg), mimetype="text/csv")
        return jsonify(run_payload(cfg))
    except SimulationAssertion as e:
        current_app.logger.error("simulation assertion: %s", e)
        return _error(e, 500)


@bench_bp.route("/stream/<scenario>")
def stream(scenario):
    try:
        cfg = bench_config_from_query(scenario, request.args)
    except ValueError as e:
        return _error(e)
    return Response(stream_rows(cfg), mimetype="text/event-stream")


@bench_bp.route("/dissect", methods=["POST"])
def dissect():
    data = request.get_json(silent=True) or {}
    hex_text = data.get("hex")
    if not hex_text:
        return _error("hex is missing")
    try:
        num_vc = int(data["num_vc"]) if data.get("num_vc") is not None else None
        return jsonify(dissect_payload(hex_text, num_vc))
    except ValueError as e:
        return _error(e)
