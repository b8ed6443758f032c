"""
Standalone Test Runner
Lets every test_*.py module run without pytest: `python test_face_ring.py [name]`
"""

import sys
import traceback
from typing import Callable, Dict


def print_header(title):
    print(f"\n{'='*70}")
    print(f"{title}")
    print(f"{'='*70}\n")


def collect_tests(namespace: dict) -> Dict[str, Callable]:
    """All module-level test_* functions, keyed by their short name"""
    return {
        name[len("test_"):]: fn
        for name, fn in namespace.items()
        if name.startswith("test_") and callable(fn)
    }


def run_one(fn: Callable) -> bool:
    try:
        fn()
        return True
    except AssertionError as e:
        print(f"❌ {fn.__name__}: assertion failed {e}")
        return False
    except Exception as e:
        print(f"❌ {fn.__name__}: {e}")
        traceback.print_exc()
        return False


def run_all_tests(title: str, tests: Dict[str, Callable]) -> bool:
    print_header(f"🧪 {title}")

    results = {name: run_one(fn) for name, fn in tests.items()}

    print_header("📊 TEST RESULTS")
    passed = sum(1 for v in results.values() if v)
    for test_name, result in results.items():
        status = "✅ PASS" if result else "❌ FAIL"
        print(f"{test_name:.<50} {status}")
    print(f"\nOverall: {passed}/{len(results)} tests passed")
    return passed == len(results)


def main(title: str, namespace: dict):
    """Run one named test from sys.argv, or all of them"""
    tests = collect_tests(namespace)
    if len(sys.argv) > 1:
        test_name = sys.argv[1].lower()
        if test_name not in tests:
            print(f"Unknown test: {test_name}")
            print(f"Available tests: {', '.join(tests.keys())}")
            sys.exit(1)
        sys.exit(0 if run_one(tests[test_name]) else 1)
    sys.exit(0 if run_all_tests(title, tests) else 1)
