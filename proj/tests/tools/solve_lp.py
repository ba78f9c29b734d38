"""Solve an LP-format file with HiGHS and print a JSON summary."""

import json
import math
import sys

import highspy


def main() -> int:
    if len(sys.argv) != 2:
        print("usage: solve_lp.py FILE.lp", file=sys.stderr)
        return 2
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 0.0)
    if h.readModel(sys.argv[1]) != highspy.HighsStatus.kOk:
        print(json.dumps({"status": "read-error"}))
        return 1
    h.run()
    lp = h.getLp()
    status = h.modelStatusToString(h.getModelStatus())
    objective = h.getInfo().objective_function_value
    out = {
        "status": status,
        "objective": objective if math.isfinite(objective) else None,
        "rows": lp.num_row_,
        "cols": lp.num_col_,
        "objective_nonzeros": sum(1 for c in lp.col_cost_ if c != 0.0),
        "offset": lp.offset_,
    }
    print(json.dumps(out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
