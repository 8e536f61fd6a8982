import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from flask import Flask, jsonify

from backend.dashboard import bench_bp


def create_app():
    app = Flask(__name__)
    app.register_blueprint(bench_bp, url_prefix="/bench")

    @app.route('/')
    def index():
        return jsonify({"service": "htsp", "bench": "/bench/"})

    return app


app = create_app()

if __name__ == '__main__':
    app.run(debug=True, threaded=True)
