"""
@Author: li
@FileName: run.py
@DateTime: 2025/07/12
@Docs: 主程序
"""

import sys

from app.cli import main

if __name__ == "__main__":
    sys.exit(main())
