"""
K3 纤维工具包命令行主入口
"""
from app.cli.router import run

if __name__ == "__main__":
    run()
