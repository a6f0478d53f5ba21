# 椭圆 K3 曲面奇异纤维工具包
