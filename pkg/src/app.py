#!/usr/bin/env python3
"""
s3lite Web Playground
HTTP API for evaluating code in long-lived interpreter sessions
"""

import io
import os

from flask import Flask, jsonify, request
from flask_cors import CORS

from dispatch import methods_of, resolve_method
from errors import S3LiteError
from evaluator import DiagnosticSink, Interpreter
from parser import parse_source
from session import Session, SessionConfig, configure_logging
from values import Environment, get_class

app = Flask(__name__)
CORS(app)

active_sessions = {}  # session_id -> Session


def _session_from(data):
    session_id = (data or {}).get('session_id')
    if not session_id or session_id not in active_sessions:
        return None
    return active_sessions[session_id]


@app.route('/')
def index():
    return jsonify({
        'name': 's3lite playground',
        'endpoints': ['/api/session', '/api/eval', '/api/methods', '/api/dispatch-trace'],
    })


@app.route('/api/session', methods=['POST'])
def create_session():
    try:
        data = request.get_json(silent=True) or {}
        config = SessionConfig(mode='repl', prelude=data.get('prelude', True), color='never')
        session = Session(config)

        session_id = os.urandom(16).hex()
        active_sessions[session_id] = session

        return jsonify({
            'success': True,
            'session_id': session_id,
            'prelude': config.prelude,
        })
    except (S3LiteError, OSError, ValueError) as e:
        return jsonify({'success': False, 'error': str(e)}), 400


@app.route('/api/eval', methods=['POST'])
def evaluate():
    try:
        data = request.get_json(silent=True)
        session = _session_from(data)
        if session is None:
            return jsonify({'success': False, 'error': 'Invalid session'}), 400

        code = data.get('code')
        if not isinstance(code, str):
            return jsonify({'success': False, 'error': 'No code provided'}), 400

        result = session.evaluate(code)
        return jsonify({
            'success': True,
            'stdout': result.stdout,
            'diagnostics': result.diagnostics,
            'exit_status': result.exit_status,
        })
    except Exception as e:
        return jsonify({'success': False, 'error': str(e)}), 500


def _session_from_args():
    return _session_from({'session_id': request.args.get('session_id')})


@app.route('/api/methods', methods=['GET'])
def list_methods():
    generic = request.args.get('generic', '')
    if not generic:
        return jsonify({'success': False, 'error': 'No generic given'}), 400
    session = _session_from_args() or Session(SessionConfig(color='never'))
    return jsonify({
        'success': True,
        'generic': generic,
        'methods': list(methods_of(generic, session.env).payload),
    })


@app.route('/api/dispatch-trace', methods=['GET'])
def dispatch_trace():
    try:
        generic = request.args.get('generic', '')
        expr = request.args.get('expr', '')
        if not generic or not expr:
            return jsonify({'success': False, 'error': 'Both generic and expr are required'}), 400

        session = _session_from_args() or Session(SessionConfig(color='never'))
        program = parse_source(expr)
        if len(program.statements) != 1:
            return jsonify({'success': False, 'error': 'expr must be a single expression'}), 400

        # bindings made by expr land in a scratch scope, never the session
        scratch = Interpreter(DiagnosticSink(), io.StringIO(), data_dir=session.interp.data_dir)
        value = scratch.eval(program.statements[0], Environment(parent=session.env, name="scratch"))

        outcome = resolve_method(generic, get_class(value), session.env)
        return jsonify({
            'success': True,
            'generic': outcome.generic,
            'classes': list(outcome.receiver_classes),
            'tried': list(outcome.candidates_tried),
            'chosen': outcome.chosen,
        })
    except S3LiteError as e:
        return jsonify({'success': False, 'error': str(e)}), 400


if __name__ == '__main__':
    configure_logging()

    print("=" * 70)
    print("🧪 s3lite - S3 DISPATCH PLAYGROUND")
    print("=" * 70)
    print(f"\n🌐 Starting server at http://localhost:{os.environ.get('PORT', 5000)}")
    print("\n✨ ENDPOINTS:")
    print("   POST /api/session          new interpreter session")
    print("   POST /api/eval             run code in a session")
    print("   GET  /api/methods          methods of a generic")
    print("   GET  /api/dispatch-trace   how a generic resolves for a value")
    print("\n⚠️  Press Ctrl+C to stop\n")
    print("=" * 70)

    app.run(debug=False, host='0.0.0.0', port=int(os.environ.get('PORT', 5000)))
