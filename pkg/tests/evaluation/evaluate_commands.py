import json
import os
import sys
import tempfile
import traceback

# Add project root to path
sys.path.append(os.getcwd())

from bound_key.cli import main

# Reports round to 12 significant digits; golden values are given to fewer.
VALUE_TOL = 1e-9


def load_cases(filepath):
    with open(filepath, "r", encoding="utf-8") as f:
        return json.load(f)


def matches(expected, actual):
    if isinstance(expected, float) and isinstance(actual, (int, float)) and not isinstance(actual, bool):
        return abs(expected - actual) <= VALUE_TOL
    if isinstance(expected, list) and isinstance(actual, list):
        return len(expected) == len(actual) and all(matches(e, a) for e, a in zip(expected, actual))
    return expected == actual


def run_case(case, workdir):
    out_path = os.path.join(workdir, f"{case['id']}.json")
    code = main(case["argv"] + ["--out", out_path])
    if code != case["expected_exit"]:
        return "FAIL", f"exit code {code}, expected {case['expected_exit']}"
    if case["expected_data"] is None:
        return "PASS", ""

    with open(out_path, "r", encoding="utf-8") as f:
        report = json.load(f)
    wrong = [
        key for key, value in case["expected_data"].items()
        if not matches(value, report["data"].get(key))
    ]
    if wrong:
        return "FAIL", f"Unexpected values for: {wrong}"
    return "PASS", ""


def run_evaluation():
    cases_path = "tests/evaluation/golden_cases.json"
    if not os.path.exists(cases_path):
        print(f"Error: {cases_path} not found.")
        return

    cases = load_cases(cases_path)
    print(f"Loaded {len(cases)} golden cases.\n")

    passed_count = 0
    with tempfile.TemporaryDirectory() as workdir:
        for case in cases:
            print(f"Running Case {case['id']}: {case['description']}")
            try:
                status, reason = run_case(case, workdir)
            except Exception as e:
                status, reason = "ERROR", str(e)
                traceback.print_exc()
            if status == "PASS":
                passed_count += 1
            print(f"  -> {status} {reason}\n")

    # Summary
    print("-" * 30)
    print(f"Evaluation Complete. Passed: {passed_count}/{len(cases)}")
    print("-" * 30)

    if passed_count < len(cases):
        sys.exit(1)


if __name__ == "__main__":
    run_evaluation()
