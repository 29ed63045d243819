from .settings import Settings, load_settings, parse_settings, ROOT_DIR
from .constants import (FilterMethod, DisplayMode, Integration, Subcommand,
                        TRACE_COLUMNS, ORACLE_COLUMNS, SPOT_COLUMNS, MTF_COLUMNS,
                        RENDER_INDEX_COLUMNS, OBJECTIVE_COLUMNS)
from .util_func import (import_filter_class,
                        deep_merge_dicts,
                        parse_focus_spec,
                        write_csv,
                        format_report_row,
                        print_report,
                        half_max_span
                        )

__all__ = ['Settings',
           'load_settings',
           'parse_settings',
           'ROOT_DIR',
           'FilterMethod',
           'DisplayMode',
           'Integration',
           'Subcommand',
           'TRACE_COLUMNS',
           'ORACLE_COLUMNS',
           'SPOT_COLUMNS',
           'MTF_COLUMNS',
           'RENDER_INDEX_COLUMNS',
           'OBJECTIVE_COLUMNS',
           'import_filter_class',
           'deep_merge_dicts',
           'parse_focus_spec',
           'write_csv',
           'format_report_row',
           'print_report',
           'half_max_span'
           ]
