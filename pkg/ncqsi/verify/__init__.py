from ncqsi.verify.report import CheckReport, Failure, Measurement, dumps_reports, write_reports
from ncqsi.verify.suites import (
    suite_projection_family,
    suite_remark2,
    suite_thm_continuous,
    suite_thm_monotone,
    suite_thm_tracial,
)
