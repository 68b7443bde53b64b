import os
from dotenv import load_dotenv

load_dotenv()

# 运行环境，默认为 prod；在 .env 中设置 APP_ENV=dev 打开调试日志
APP_ENV = os.getenv("APP_ENV", "prod").lower()

LOG_LEVEL = os.getenv("CHERNOFF_LOG_LEVEL", "DEBUG" if APP_ENV == "dev" else "WARNING").upper()

# 为空时不写日志文件
LOG_FILE = os.getenv("CHERNOFF_LOG_FILE") or None

# Monte Carlo 分块并行的线程数；结果与线程数无关
WORKERS = max(1, int(os.getenv("CHERNOFF_WORKERS", "4")))

# 单次模拟允许的伯努利抽样总数上限 (trials * n)
MAX_BIT_DRAWS = int(os.getenv("CHERNOFF_MAX_BIT_DRAWS", str(10**9)))
